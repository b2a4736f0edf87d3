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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace noma {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Downlink network: B base stations with N_t antennas each, K_c single-antenna
// users per cell. Users are numbered cell-major, so user u lives in cell
// u / K_c. link(b, u) is the channel from BS b to user u; the data channel of
// user u is link(cell_of[u], u).
struct NetworkInstance
{
    int num_cells = 1;
    int antennas = 1;
    int users_per_cell = 1;
    std::vector<CVec> channel; // num_cells * num_users(), indexed [b * K + u]
    double noise_power = 1.0;  // W
    double power_budget = 10.0; // W per BS
    std::vector<int> cell_of;
    std::uint64_t seed = 0;

    int num_users() const { return num_cells * users_per_cell; }

    const CVec &link(int bs, int user) const { return channel[static_cast<std::size_t>(bs * num_users() + user)]; }
    CVec &link(int bs, int user) { return channel[static_cast<std::size_t>(bs * num_users() + user)]; }

    // Data channel of a user (from its serving BS).
    const CVec &data(int user) const { return link(cell_of[user], user); }

    int first_user(int cell) const { return cell * users_per_cell; }
    std::vector<int> users_in(int cell) const;

    // Throws std::invalid_argument naming the first broken invariant.
    void check() const;
};

// One dedicated beam per global user; beam w[u] is transmitted by BS cell_of[u].
struct BeamformingSolution
{
    std::vector<CVec> w;

    std::vector<double> cell_power(const NetworkInstance &inst) const;
    bool all_finite() const;
};

// Rescale each cell's beams so its total power is at most the budget.
void project_to_budget(const NetworkInstance &inst, BeamformingSolution &beams);

} // namespace noma
