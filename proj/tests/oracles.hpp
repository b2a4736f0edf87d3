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

// Independent reference computations for the test suites. Nothing here calls
// into the rate, ordering, or channel-generation code it is used to check.

#pragma once

#include "noma/types.hpp"
#include "noma/sic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace noma::oracle {

inline double inner_abs2(const CVec &h, const CVec &w)
{
    std::complex<double> acc = 0.0;
    for (Eigen::Index a = 0; a < h.size(); ++a)
        acc += std::conj(h[a]) * w[a];
    return acc.real() * acc.real() + acc.imag() * acc.imag();
}

inline double correlation(const CVec &a, const CVec &b)
{
    std::complex<double> acc = 0.0;
    double na = 0.0, nb = 0.0;
    for (Eigen::Index t = 0; t < a.size(); ++t) {
        acc += std::conj(a[t]) * b[t];
        na += std::norm(a[t]);
        nb += std::norm(b[t]);
    }
    return std::abs(acc) / std::sqrt(na * nb);
}

// Plain SDMA: every other beam is interference.
inline std::vector<double> sdma_rates(const NetworkInstance &inst, const BeamformingSolution &beams)
{
    const int K = inst.num_users();
    std::vector<double> r(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        double signal = 0.0, interference = 0.0;
        for (int j = 0; j < K; ++j) {
            const double g = inner_abs2(inst.link(inst.cell_of[static_cast<std::size_t>(j)], k),
                                        beams.w[static_cast<std::size_t>(j)]);
            (j == k ? signal : interference) += g;
        }
        r[static_cast<std::size_t>(k)] = std::log2(1.0 + signal / (inst.noise_power + interference));
    }
    return r;
}

struct OrderOracleResult
{
    std::vector<double> achievable;
    bool unique_order = true; // exactly one permutation satisfied the rule at every receiver
};

// Enumerates every decoding order of the cancelled signals at each receiver
// (own signal last), keeps the one whose gains are non-increasing with index
// tie-breaks, and evaluates rates with direct sums.
inline OrderOracleResult all_orders(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &beams)
{
    const int K = inst.num_users();
    auto gain = [&](int k, int i) {
        return inner_abs2(inst.link(inst.cell_of[static_cast<std::size_t>(i)], k), beams.w[static_cast<std::size_t>(i)]);
    };
    std::vector<std::vector<double>> rate(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(K), -1.0));
    OrderOracleResult out;
    for (int k = 0; k < K; ++k) {
        std::vector<int> cancelled;
        for (int i = 0; i < K; ++i)
            if (sic(i, k))
                cancelled.push_back(i);
        std::sort(cancelled.begin(), cancelled.end());
        int matches = 0;
        std::vector<int> chosen;
        do {
            bool ok = true;
            for (std::size_t p = 0; p + 1 < cancelled.size(); ++p) {
                const double ga = gain(k, cancelled[p]);
                const double gb = gain(k, cancelled[p + 1]);
                if (ga < gb || (ga == gb && cancelled[p] > cancelled[p + 1]))
                    ok = false;
            }
            if (ok) {
                ++matches;
                chosen = cancelled;
            }
        } while (std::next_permutation(cancelled.begin(), cancelled.end()));
        if (matches != 1)
            out.unique_order = false;
        chosen.push_back(k);
        for (std::size_t m = 0; m < chosen.size(); ++m) {
            double denom = inst.noise_power;
            for (int j = 0; j < K; ++j) {
                const bool earlier = std::find(chosen.begin(), chosen.begin() + static_cast<long>(m) + 1, j) !=
                                     chosen.begin() + static_cast<long>(m) + 1;
                if (!earlier)
                    denom += gain(k, j);
            }
            rate[static_cast<std::size_t>(chosen[m])][static_cast<std::size_t>(k)] =
                std::log2(1.0 + gain(k, chosen[m]) / denom);
        }
    }
    for (int i = 0; i < K; ++i) {
        double r = rate[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        for (int k = 0; k < K; ++k)
            if (sic(i, k))
                r = std::min(r, rate[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
        out.achievable.push_back(r);
    }
    return out;
}

// Monte-Carlo mean of the intra-cell pairwise correlation under
// h_u = sqrt(rho) h0 + sqrt(1 - rho) e_u, drawn with a different generator.
inline double mc_mean_correlation(double rho, int users, int antennas, int samples, unsigned long long seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    auto draw = [&] {
        CVec v(antennas);
        for (int a = 0; a < antennas; ++a)
            v[a] = {n(gen), n(gen)};
        return v;
    };
    double total = 0.0;
    long count = 0;
    for (int s = 0; s < samples; ++s) {
        const CVec h0 = draw();
        std::vector<CVec> h;
        for (int u = 0; u < users; ++u)
            h.push_back(std::sqrt(rho) * h0 + std::sqrt(1.0 - rho) * draw());
        for (int i = 0; i < users; ++i)
            for (int j = i + 1; j < users; ++j) {
                total += correlation(h[static_cast<std::size_t>(i)], h[static_cast<std::size_t>(j)]);
                ++count;
            }
    }
    return total / static_cast<double>(count);
}

} // namespace noma::oracle
