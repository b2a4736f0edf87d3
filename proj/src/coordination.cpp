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

#include "noma/coordination.hpp"
#include "noma/channel.hpp"

#include <stdexcept>

namespace noma {

SicMatrix restrict_to_cell(const SicMatrix &sic, const NetworkInstance &inst, int cell)
{
    const int Kc = inst.users_per_cell;
    const int base = inst.first_user(cell);
    SicMatrix out(Kc);
    for (int i = 0; i < Kc; ++i)
        for (int k = 0; k < Kc; ++k)
            if (sic(base + i, base + k))
                out.set(i, k);
    return out;
}

CentralizedResult centralized_optimize(const NetworkInstance &inst, const SicMatrix &sic, const OptimizerConfig &cfg)
{
    require_valid(sic, inst);
    CentralizedResult res;
    const std::int64_t K = inst.num_users();
    for (int b = 0; b < inst.num_cells; ++b)
        res.ledger.record(1, b, kCenter, 0, K * inst.antennas);

    res.opt = optimize_beams(inst, sic, zf_init(inst), cfg);
    res.beams = res.opt.beams;

    for (int b = 0; b < inst.num_cells; ++b)
        res.ledger.record(2, kCenter, b, 0, std::int64_t{inst.users_per_cell} * inst.antennas);
    return res;
}

DistributedResult distributed_optimize(const NetworkInstance &inst, const SicMatrix &sic, int rounds,
                                       const OptimizerConfig &cfg)
{
    if (rounds < 1)
        throw std::invalid_argument("distributed_optimize: rounds must be >= 1");
    require_valid(sic, inst);
    const int B = inst.num_cells;
    const int Kc = inst.users_per_cell;

    std::vector<NetworkInstance> cells;
    std::vector<SicMatrix> local_sic;
    for (int b = 0; b < B; ++b) {
        cells.push_back(extract_cell(inst, b));
        local_sic.push_back(restrict_to_cell(sic, inst, b));
    }

    DistributedResult res;
    res.beams = zf_init(inst);

    for (int r = 1; r <= rounds; ++r) {
        // Message phase: interference[b'][j] accumulates what every other BS
        // imposes on user j of cell b'.
        std::vector<std::vector<double>> interference(static_cast<std::size_t>(B),
                                                      std::vector<double>(static_cast<std::size_t>(Kc), 0.0));
        for (int src = 0; src < B; ++src)
            for (int dst = 0; dst < B; ++dst) {
                if (src == dst)
                    continue;
                for (int j = 0; j < Kc; ++j) {
                    const int victim = inst.first_user(dst) + j;
                    double p = 0.0;
                    for (int i : inst.users_in(src))
                        p += std::norm(inst.link(src, victim).dot(res.beams.w[static_cast<std::size_t>(i)]));
                    interference[static_cast<std::size_t>(dst)][static_cast<std::size_t>(j)] += p;
                }
                res.ledger.record(r, src, dst, Kc, 0);
            }

        // Update phase: every BS starts from the previous round's beams.
        BeamformingSolution next = res.beams;
        for (int b = 0; b < B; ++b) {
            BeamformingSolution start;
            for (int i : inst.users_in(b))
                start.w.push_back(res.beams.w[static_cast<std::size_t>(i)]);
            auto opt = optimize_beams(cells[static_cast<std::size_t>(b)], local_sic[static_cast<std::size_t>(b)], start,
                                      cfg, interference[static_cast<std::size_t>(b)]);
            res.optimizer_iterations += opt.iterations;
            for (int j = 0; j < Kc; ++j)
                next.w[static_cast<std::size_t>(inst.first_user(b) + j)] = opt.beams.w[static_cast<std::size_t>(j)];
        }
        res.beams = std::move(next);
        res.sum_rate_trace.push_back(rate_report(inst, sic, res.beams).sum_rate);
    }
    return res;
}

} // namespace noma
