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

#include "noma/sic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace noma {

int SicMatrix::count() const
{
    int n = 0;
    for (auto v : d_)
        n += v;
    return n;
}

std::vector<int> SicMatrix::decoders_of(int i) const
{
    std::vector<int> out;
    for (int k = 0; k < k_; ++k)
        if ((*this)(i, k))
            out.push_back(k);
    return out;
}

std::vector<int> SicMatrix::cancelled_at(int k) const
{
    std::vector<int> out;
    for (int i = 0; i < k_; ++i)
        if ((*this)(i, k))
            out.push_back(i);
    return out;
}

std::string SicViolation::message() const
{
    const std::string at = "(" + std::to_string(i) + "," + std::to_string(k) + ")";
    switch (kind) {
    case Kind::self_decoding: return "self decoding at " + at;
    case Kind::mutual_decoding: return "mutual decoding at " + at;
    case Kind::cross_cell: return "cross-cell SIC at " + at;
    }
    return "unknown violation";
}

std::vector<SicViolation> validate(const SicMatrix &sic, const NetworkInstance &inst)
{
    const int K = inst.num_users();
    if (sic.size() != K)
        throw std::invalid_argument("SIC matrix is " + std::to_string(sic.size()) + "x" + std::to_string(sic.size()) +
                                    " but the network has " + std::to_string(K) + " users");
    std::vector<SicViolation> out;
    for (int i = 0; i < K; ++i) {
        if (sic(i, i))
            out.push_back({SicViolation::Kind::self_decoding, i, i});
        for (int k = i + 1; k < K; ++k) {
            if (sic(i, k) && sic(k, i))
                out.push_back({SicViolation::Kind::mutual_decoding, i, k});
            if (inst.cell_of[static_cast<std::size_t>(i)] != inst.cell_of[static_cast<std::size_t>(k)]) {
                if (sic(i, k))
                    out.push_back({SicViolation::Kind::cross_cell, i, k});
                if (sic(k, i))
                    out.push_back({SicViolation::Kind::cross_cell, k, i});
            }
        }
    }
    return out;
}

void require_valid(const SicMatrix &sic, const NetworkInstance &inst)
{
    const auto v = validate(sic, inst);
    if (!v.empty())
        throw std::invalid_argument("invalid SIC matrix: " + v.front().message());
}

GainMatrix effective_gains(const NetworkInstance &inst, const BeamformingSolution &beams)
{
    const int K = inst.num_users();
    if (beams.w.size() != static_cast<std::size_t>(K))
        throw std::invalid_argument("beamforming solution has wrong user count");
    GainMatrix g(K, K);
    for (int i = 0; i < K; ++i) {
        const int b = inst.cell_of[static_cast<std::size_t>(i)];
        const CVec &w = beams.w[static_cast<std::size_t>(i)];
        for (int k = 0; k < K; ++k)
            g(k, i) = std::norm(inst.link(b, k).dot(w));
    }
    return g;
}

namespace {

std::vector<int> order_at(const SicMatrix &sic, const GainMatrix &gains, int k)
{
    std::vector<int> order = sic.cancelled_at(k);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (gains(k, a) != gains(k, b))
            return gains(k, a) > gains(k, b);
        return a < b;
    });
    order.push_back(k);
    return order;
}

} // namespace

DecodingOrders decoding_orders(const SicMatrix &sic, const GainMatrix &gains)
{
    DecodingOrders orders(static_cast<std::size_t>(sic.size()));
    for (int k = 0; k < sic.size(); ++k)
        orders[static_cast<std::size_t>(k)] = order_at(sic, gains, k);
    return orders;
}

std::vector<int> decoding_order(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &beams,
                                int k)
{
    if (k < 0 || k >= inst.num_users())
        throw std::invalid_argument("decoding_order: user out of range");
    return order_at(sic, effective_gains(inst, beams), k);
}

bool RateReport::has_decode(int i, int k) const
{
    return !std::isnan(decode(i, k));
}

RateReport rate_report_with_orders(const NetworkInstance &inst, const SicMatrix &sic, const GainMatrix &gains,
                                   const DecodingOrders &orders, std::span<const double> external)
{
    const int K = inst.num_users();
    if (!external.empty() && external.size() != static_cast<std::size_t>(K))
        throw std::invalid_argument("external interference vector has wrong length");
    RateReport rep;
    rep.users = K;
    rep.decode_rate.assign(static_cast<std::size_t>(K * K), std::numeric_limits<double>::quiet_NaN());
    rep.order = orders;

    std::vector<char> in_order(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const auto &ord = orders[static_cast<std::size_t>(k)];
        std::fill(in_order.begin(), in_order.end(), 0);
        for (int j : ord)
            in_order[static_cast<std::size_t>(j)] = 1;
        double floor_power = inst.noise_power + (external.empty() ? 0.0 : external[static_cast<std::size_t>(k)]);
        for (int j = 0; j < K; ++j)
            if (!in_order[static_cast<std::size_t>(j)])
                floor_power += gains(k, j);
        // Walk the order backwards so each denominator is the noise floor plus
        // the signals still undecoded after position m.
        double later = 0.0;
        for (int m = static_cast<int>(ord.size()) - 1; m >= 0; --m) {
            const int i = ord[static_cast<std::size_t>(m)];
            const double sinr = gains(k, i) / (floor_power + later);
            rep.decode_rate[static_cast<std::size_t>(i * K + k)] = std::log2(1.0 + sinr);
            later += gains(k, i);
        }
    }

    rep.achievable_rate.assign(static_cast<std::size_t>(K), 0.0);
    for (int i = 0; i < K; ++i) {
        double r = rep.decode(i, i);
        for (int k : sic.decoders_of(i))
            r = std::min(r, rep.decode(i, k));
        rep.achievable_rate[static_cast<std::size_t>(i)] = r;
        rep.sum_rate += r;
    }
    return rep;
}

RateReport rate_report(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &beams,
                       std::span<const double> external)
{
    require_valid(sic, inst);
    if (!beams.all_finite())
        throw std::invalid_argument("rate_report: non-finite beam entry");
    const auto p = beams.cell_power(inst);
    for (std::size_t b = 0; b < p.size(); ++b)
        if (p[b] > inst.power_budget * (1.0 + 1e-9))
            throw std::invalid_argument("rate_report: cell " + std::to_string(b) + " exceeds its power budget");
    const GainMatrix g = effective_gains(inst, beams);
    return rate_report_with_orders(inst, sic, g, decoding_orders(sic, g), external);
}

double sum_rate(const RateReport &report)
{
    double s = 0.0;
    for (double r : report.achievable_rate)
        s += r;
    return s;
}

} // namespace noma
