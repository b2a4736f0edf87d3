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

#include "noma/overhead.hpp"
#include "noma/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace noma {

enum class Aggregation { max, sum, mean };

std::string to_string(Aggregation a);
Aggregation parse_aggregation(std::string_view text);

struct GnnArchitecture
{
    int depth = 2;                      // message-passing layers = communication rounds
    std::vector<int> embed_size{16, 16}; // reals per message, per layer
    int hidden_width = 32;
    Aggregation aggregation = Aggregation::mean;

    void check() const;
};

struct DenseLayer
{
    Eigen::MatrixXd weight;
    Eigen::VectorXd bias;

    Eigen::VectorXd affine(const Eigen::VectorXd &x) const { return weight * x + bias; }
};

// Shared by every BS. Shapes for K_c users, N_t antennas (F = 2 K_c N_t):
//   input       H x F
//   encoder[l]  S_l x (H + F)      [hidden ; edge feature]
//   combiner[l] H x (H + S_l + F)  [hidden ; aggregate ; node feature]
//   output      F x H
struct GnnWeights
{
    DenseLayer input;
    std::vector<DenseLayer> encoders;
    std::vector<DenseLayer> combiners;
    DenseLayer output;

    static GnnWeights random(const GnnArchitecture &arch, int users_per_cell, int antennas, std::uint64_t seed);
    static GnnWeights zeros(const GnnArchitecture &arch, int users_per_cell, int antennas);

    // Throws std::invalid_argument on any shape mismatch.
    void check(const GnnArchitecture &arch, int users_per_cell, int antennas) const;
};

// Text container: magic line "NOMAGNN1", then "arrays <n>", then per array
// "<name> <rows> <cols>" followed by rows*cols values in row-major order,
// written as shortest round-trip decimals.
void save_weights(const GnnWeights &w, std::ostream &os);
GnnWeights load_weights(std::istream &is);
void save_weights(const GnnWeights &w, const std::filesystem::path &path);
GnnWeights load_weights(const std::filesystem::path &path);

struct GnnResult
{
    BeamformingSolution beams;
    OverheadLedger ledger;
    std::vector<Eigen::VectorXd> raw_output; // per BS, before reshaping and projection
    std::vector<bool> used_fallback;         // per BS, ZF fallback on an all-zero output
};

// Inference over the full-mesh BS graph; one communication round per layer.
GnnResult gnn_forward(const NetworkInstance &inst, const GnnArchitecture &arch, const GnnWeights &weights);

// 8 * B (B - 1) * sum of embedding sizes.
std::int64_t gnn_overhead_closed_form(const GnnArchitecture &arch, int num_cells);

} // namespace noma
