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

#include "noma/types.hpp"

#include <cstdint>

namespace noma {

struct ChannelGenConfig
{
    double corr_target = 0.5;     // intra-cell correlation knob rho in [0,1]
    double cross_cell_gain = 0.3; // amplitude attenuation of inter-cell links, in [0,1]
    std::uint64_t seed = 0;
    double noise_power = 1.0;
    double power_budget = 10.0;

    void check() const;
};

// Intra-cell channels follow h_u = sqrt(rho) h0 + sqrt(1 - rho) e_u with one
// shared CN(0, I) vector h0 per cell and independent CN(0, I) innovations e_u.
NetworkInstance generate_single_cell(int users, int antennas, const ChannelGenConfig &cfg);

// Inter-cell links are independent CN(0, I) draws scaled by cross_cell_gain.
// With num_cells == 1 this is identical to generate_single_cell.
NetworkInstance generate_multi_cell(int num_cells, int users_per_cell, int antennas, const ChannelGenConfig &cfg);

// |h_i^H h_j| / (|h_i| |h_j|), in [0, 1].
double pairwise_correlation(const CVec &hi, const CVec &hj);

// Extract a single-cell instance holding only the users of `cell` and their
// data channels. Global user u maps to local index u - first_user(cell).
NetworkInstance extract_cell(const NetworkInstance &inst, int cell);

} // namespace noma
