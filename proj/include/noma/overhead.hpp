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

#include <cstdint>
#include <vector>

namespace noma {

inline constexpr int kCenter = -1; // node id of the central unit
inline constexpr std::int64_t kBitsPerReal = 8;
inline constexpr std::int64_t kBitsPerComplex = 16;

struct LedgerEntry
{
    int round = 0;
    int sender = 0;   // BS id or kCenter
    int receiver = 0; // BS id or kCenter
    std::int64_t n_real = 0;
    std::int64_t n_complex = 0;
};

// Payload-only message trace; headers and acknowledgements are not billed.
struct OverheadLedger
{
    std::vector<LedgerEntry> entries;
    std::int64_t total_bits = 0;

    // Appends one message and keeps total_bits in step.
    void record(int round, int sender, int receiver, std::int64_t n_real, std::int64_t n_complex);
};

// Sum of 8 bits per real and 16 per complex, recomputed from the entries.
// Throws std::invalid_argument on negative counts.
std::int64_t overhead_bits(const OverheadLedger &ledger);

// Closed forms for the three coordination patterns on a full-mesh topology.
std::int64_t centralized_overhead_closed_form(int num_cells, int antennas, int users_per_cell);
std::int64_t distributed_overhead_closed_form(int rounds, int num_cells, int users_per_cell);

} // namespace noma
