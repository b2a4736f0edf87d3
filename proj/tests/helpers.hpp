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
#pragma once

#include "noma/beamforming.hpp"
#include "noma/channel.hpp"
#include "noma/rng.hpp"
#include "noma/sic.hpp"

#include <vector>

namespace noma::testing {

// Single-cell instance with the given data channels.
inline NetworkInstance single_cell(const std::vector<CVec> &h, double noise = 1.0, double budget = 10.0)
{
    NetworkInstance inst;
    inst.num_cells = 1;
    inst.antennas = static_cast<int>(h.front().size());
    inst.users_per_cell = static_cast<int>(h.size());
    inst.channel = h;
    inst.cell_of.assign(h.size(), 0);
    inst.noise_power = noise;
    inst.power_budget = budget;
    inst.check();
    return inst;
}

inline CVec real_vec(std::initializer_list<double> v)
{
    CVec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index a = 0;
    for (double x : v)
        out[a++] = x;
    return out;
}

inline NetworkInstance random_instance(int cells, int users, int antennas, double rho, std::uint64_t seed,
                                       double iota = 0.3)
{
    ChannelGenConfig c;
    c.corr_target = rho;
    c.cross_cell_gain = iota;
    c.seed = seed;
    return generate_multi_cell(cells, users, antennas, c);
}

// Random beams scaled to use a fraction of each cell's budget.
inline BeamformingSolution random_beams(const NetworkInstance &inst, std::uint64_t seed, double fill = 0.8)
{
    Stream s(mix_seed(seed, {77}));
    BeamformingSolution b;
    for (int u = 0; u < inst.num_users(); ++u) {
        CVec w(inst.antennas);
        for (int a = 0; a < inst.antennas; ++a) {
            const double re = s.normal();
            const double im = s.normal();
            w[a] = cplx(re, im);
        }
        b.w.push_back(w);
    }
    const auto p = b.cell_power(inst);
    for (int u = 0; u < inst.num_users(); ++u)
        b.w[static_cast<std::size_t>(u)] *= std::sqrt(fill * inst.power_budget / p[static_cast<std::size_t>(inst.cell_of[static_cast<std::size_t>(u)])]);
    return b;
}

// Random valid SIC matrix: each intra-cell pair independently none / i->k / k->i.
inline SicMatrix random_sic(const NetworkInstance &inst, std::uint64_t seed)
{
    Stream s(mix_seed(seed, {91}));
    SicMatrix d(inst.num_users());
    for (int c = 0; c < inst.num_cells; ++c) {
        const auto users = inst.users_in(c);
        for (std::size_t a = 0; a < users.size(); ++a)
            for (std::size_t b = a + 1; b < users.size(); ++b) {
                const auto r = s.next_u64() % 3;
                if (r == 1)
                    d.set(users[a], users[b]);
                else if (r == 2)
                    d.set(users[b], users[a]);
            }
    }
    return d;
}

} // namespace noma::testing
