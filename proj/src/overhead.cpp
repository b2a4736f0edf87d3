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

#include "noma/overhead.hpp"

#include <stdexcept>

namespace noma {

void OverheadLedger::record(int round, int sender, int receiver, std::int64_t n_real, std::int64_t n_complex)
{
    if (n_real < 0 || n_complex < 0)
        throw std::invalid_argument("ledger counts must be non-negative");
    entries.push_back({round, sender, receiver, n_real, n_complex});
    total_bits += kBitsPerReal * n_real + kBitsPerComplex * n_complex;
}

std::int64_t overhead_bits(const OverheadLedger &ledger)
{
    std::int64_t bits = 0;
    for (const auto &e : ledger.entries) {
        if (e.n_real < 0 || e.n_complex < 0)
            throw std::invalid_argument("ledger entry with negative count");
        bits += kBitsPerReal * e.n_real + kBitsPerComplex * e.n_complex;
    }
    return bits;
}

std::int64_t centralized_overhead_closed_form(int num_cells, int antennas, int users_per_cell)
{
    const std::int64_t B = num_cells;
    const std::int64_t K = B * users_per_cell;
    // CSI upload of every BS-to-user link, then each BS's own beams back.
    return kBitsPerComplex * (B * K * antennas + B * std::int64_t{users_per_cell} * antennas);
}

std::int64_t distributed_overhead_closed_form(int rounds, int num_cells, int users_per_cell)
{
    const std::int64_t B = num_cells;
    return kBitsPerReal * std::int64_t{rounds} * B * (B - 1) * users_per_cell;
}

} // namespace noma
