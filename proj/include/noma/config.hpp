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
#include "noma/gnn.hpp"
#include "noma/sic.hpp"
#include "noma/sic_search.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace noma {

struct ExperimentConfig
{
    int cells = 3;
    int users_per_cell = 6;
    int antennas = 4;
    std::vector<double> corr{0.1, 0.3, 0.5, 0.7, 0.9};
    double cross_gain = 0.3;
    std::vector<Scheme> schemes{SchemeSdma{}, SchemeBbNoma{}, SchemeCbNoma{}, SchemeClusterFree{}};
    int trials = 30;
    std::uint64_t seed = 1;
    double noise_power = 1.0;
    double power_budget = 10.0;

    OptimizerConfig opt;
    SearchConfig search;

    int rounds = 10; // distributed coordination
    GnnArchitecture gnn;
    std::filesystem::path gnn_weights; // empty: seeded random weights

    std::filesystem::path out = "results.csv";
    bool deterministic_timing = false; // write wall_ms as 0
    int threads = 0;                   // 0: NOMA_FORGE_THREADS or OpenMP default
};

// Bad syntax, unknown key, or a violated constraint. `field` names the
// offending key; `line` is 0 for command-line overrides.
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string field, int line, const std::string &what)
        : std::runtime_error(what), field_(std::move(field)), line_(line)
    {}
    const std::string &field() const { return field_; }
    int line() const { return line_; }

private:
    std::string field_;
    int line_;
};

using Setting = std::pair<std::string, std::string>;

// Flat key=value text ('#' starts a comment). Overrides are applied after the
// file, so they win. Unknown keys are rejected.
ExperimentConfig parse_config(const std::optional<std::filesystem::path> &file,
                              const std::vector<Setting> &overrides = {});
ExperimentConfig parse_config_text(const std::string &text, const std::vector<Setting> &overrides = {});

void validate(const ExperimentConfig &cfg);

// Every key accepted by parse_config, in documentation order.
const std::vector<std::string> &config_keys();

} // namespace noma
