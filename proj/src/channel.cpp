// SPDX-License-Identifier: Apache-2.0
//
// noma-forge: cluster-free multiple-antenna NOMA link-level simulator
// Copyright (C) 2026 The noma-forge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "noma/channel.hpp"
#include "noma/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace noma {

double Stream::normal() noexcept
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::vector<int> NetworkInstance::users_in(int cell) const
{
    std::vector<int> out(static_cast<std::size_t>(users_per_cell));
    for (int j = 0; j < users_per_cell; ++j)
        out[static_cast<std::size_t>(j)] = first_user(cell) + j;
    return out;
}

void NetworkInstance::check() const
{
    if (num_cells < 1 || antennas < 1 || users_per_cell < 1)
        throw std::invalid_argument("network dimensions must be positive");
    if (!(noise_power > 0.0) || !std::isfinite(noise_power))
        throw std::invalid_argument("noise_power must be positive");
    if (!(power_budget > 0.0) || !std::isfinite(power_budget))
        throw std::invalid_argument("power_budget must be positive");
    const int K = num_users();
    if (channel.size() != static_cast<std::size_t>(num_cells * K))
        throw std::invalid_argument("channel table has wrong size");
    if (cell_of.size() != static_cast<std::size_t>(K))
        throw std::invalid_argument("cell_of has wrong size");
    std::vector<int> count(static_cast<std::size_t>(num_cells), 0);
    for (int u = 0; u < K; ++u) {
        const int c = cell_of[static_cast<std::size_t>(u)];
        if (c < 0 || c >= num_cells)
            throw std::invalid_argument("cell_of[" + std::to_string(u) + "] out of range");
        ++count[static_cast<std::size_t>(c)];
    }
    for (int c : count)
        if (c != users_per_cell)
            throw std::invalid_argument("every cell must hold exactly users_per_cell users");
    for (const auto &h : channel) {
        if (h.size() != antennas)
            throw std::invalid_argument("channel vector length differs from antenna count");
        if (!h.allFinite())
            throw std::invalid_argument("non-finite channel entry");
    }
    for (int u = 0; u < K; ++u)
        if (data(u).squaredNorm() == 0.0)
            throw std::invalid_argument("zero data channel for user " + std::to_string(u));
}

std::vector<double> BeamformingSolution::cell_power(const NetworkInstance &inst) const
{
    std::vector<double> p(static_cast<std::size_t>(inst.num_cells), 0.0);
    for (std::size_t u = 0; u < w.size(); ++u)
        p[static_cast<std::size_t>(inst.cell_of[u])] += w[u].squaredNorm();
    return p;
}

bool BeamformingSolution::all_finite() const
{
    for (const auto &v : w)
        if (!v.allFinite())
            return false;
    return true;
}

void project_to_budget(const NetworkInstance &inst, BeamformingSolution &beams)
{
    const auto p = beams.cell_power(inst);
    for (std::size_t u = 0; u < beams.w.size(); ++u) {
        const double pc = p[static_cast<std::size_t>(inst.cell_of[u])];
        if (pc > inst.power_budget)
            beams.w[u] *= std::sqrt(inst.power_budget / pc);
    }
}

void ChannelGenConfig::check() const
{
    if (!(corr_target >= 0.0 && corr_target <= 1.0))
        throw std::invalid_argument("corr_target must lie in [0,1]");
    if (!(cross_cell_gain >= 0.0 && cross_cell_gain <= 1.0))
        throw std::invalid_argument("cross_cell_gain must lie in [0,1]");
    if (!(noise_power > 0.0))
        throw std::invalid_argument("noise_power must be positive");
    if (!(power_budget > 0.0))
        throw std::invalid_argument("power_budget must be positive");
}

namespace {

enum : std::uint64_t { kShared = 1, kInnovation = 2, kCross = 3 };

// CN(0, I): real and imaginary parts each carry variance 1/2.
CVec draw_cn(Stream &s, int n)
{
    CVec v(n);
    const double scale = std::sqrt(0.5);
    for (int a = 0; a < n; ++a) {
        const double re = s.normal();
        const double im = s.normal();
        v[a] = cplx(scale * re, scale * im);
    }
    return v;
}

} // namespace

NetworkInstance generate_multi_cell(int num_cells, int users_per_cell, int antennas, const ChannelGenConfig &cfg)
{
    if (num_cells < 1)
        throw std::invalid_argument("num_cells must be >= 1");
    if (users_per_cell < 1)
        throw std::invalid_argument("user count must be >= 1");
    if (antennas < 1)
        throw std::invalid_argument("antenna count must be >= 1");
    cfg.check();

    NetworkInstance inst;
    inst.num_cells = num_cells;
    inst.antennas = antennas;
    inst.users_per_cell = users_per_cell;
    inst.noise_power = cfg.noise_power;
    inst.power_budget = cfg.power_budget;
    inst.seed = cfg.seed;
    const int K = inst.num_users();
    inst.cell_of.resize(static_cast<std::size_t>(K));
    for (int u = 0; u < K; ++u)
        inst.cell_of[static_cast<std::size_t>(u)] = u / users_per_cell;
    inst.channel.assign(static_cast<std::size_t>(num_cells * K), CVec::Zero(antennas));

    const double a = std::sqrt(cfg.corr_target);
    const double b = std::sqrt(1.0 - cfg.corr_target);
    for (int c = 0; c < num_cells; ++c) {
        Stream shared_stream(mix_seed(cfg.seed, {kShared, static_cast<std::uint64_t>(c)}));
        const CVec h0 = draw_cn(shared_stream, antennas);
        for (int j = 0; j < users_per_cell; ++j) {
            Stream s(mix_seed(cfg.seed, {kInnovation, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(j)}));
            inst.link(c, c * users_per_cell + j) = a * h0 + b * draw_cn(s, antennas);
        }
    }
    for (int tx = 0; tx < num_cells; ++tx)
        for (int c = 0; c < num_cells; ++c) {
            if (c == tx)
                continue;
            for (int j = 0; j < users_per_cell; ++j) {
                Stream s(mix_seed(cfg.seed, {kCross, static_cast<std::uint64_t>(tx), static_cast<std::uint64_t>(c),
                                             static_cast<std::uint64_t>(j)}));
                inst.link(tx, c * users_per_cell + j) = cfg.cross_cell_gain * draw_cn(s, antennas);
            }
        }
    return inst;
}

NetworkInstance generate_single_cell(int users, int antennas, const ChannelGenConfig &cfg)
{
    return generate_multi_cell(1, users, antennas, cfg);
}

double pairwise_correlation(const CVec &hi, const CVec &hj)
{
    if (hi.size() != hj.size())
        throw std::invalid_argument("pairwise_correlation: length mismatch");
    const double ni = hi.norm();
    const double nj = hj.norm();
    if (ni == 0.0 || nj == 0.0)
        throw std::invalid_argument("pairwise_correlation: zero-norm channel");
    const double c = std::abs(hi.dot(hj)) / (ni * nj);
    return std::min(c, 1.0);
}

NetworkInstance extract_cell(const NetworkInstance &inst, int cell)
{
    if (cell < 0 || cell >= inst.num_cells)
        throw std::invalid_argument("extract_cell: cell out of range");
    NetworkInstance out;
    out.num_cells = 1;
    out.antennas = inst.antennas;
    out.users_per_cell = inst.users_per_cell;
    out.noise_power = inst.noise_power;
    out.power_budget = inst.power_budget;
    out.seed = inst.seed;
    out.cell_of.assign(static_cast<std::size_t>(inst.users_per_cell), 0);
    out.channel.reserve(static_cast<std::size_t>(inst.users_per_cell));
    for (int u : inst.users_in(cell))
        out.channel.push_back(inst.link(cell, u));
    return out;
}

} // namespace noma
