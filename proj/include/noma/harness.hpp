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

#include "noma/config.hpp"
#include "noma/parallel.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace noma {

inline constexpr const char *kCsvHeader = "corr,scheme,trial,seed,sum_rate_bps_hz,iterations,wall_ms,overhead_bits";

struct ResultRow
{
    double corr = 0.0;
    std::string scheme;
    int trial = 0;
    std::uint64_t seed = 0;
    double sum_rate = 0.0; // bit/s/Hz
    long iterations = 0;
    double wall_ms = 0.0;
    std::int64_t overhead_bits = 0;
};

struct SchemeOutcome
{
    SicMatrix sic;
    BeamformingSolution beams;
    double sum_rate = 0.0;
    long iterations = 0;
};

// Instance seed for one (corr grid index, trial); shared by every scheme.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t corr_index, int trial);

NetworkInstance make_instance(const ExperimentConfig &cfg, double corr, std::uint64_t seed);

// Builds the SIC matrix for the scheme and its beams. The cluster-free
// local-search path finishes by re-optimising its matrix and the all-zero
// matrix with cfg.opt and keeping the better one.
SchemeOutcome evaluate_scheme(const NetworkInstance &inst, const Scheme &scheme, const ExperimentConfig &cfg,
                              Execution exec = Execution::serial);

std::vector<ResultRow> sweep_rows(const ExperimentConfig &cfg, Execution exec = Execution::parallel);
std::vector<ResultRow> overhead_rows(const ExperimentConfig &cfg, Execution exec = Execution::parallel);

// Rows sorted by (corr, trial, scheme).
void sort_rows(std::vector<ResultRow> &rows);
void write_csv(std::ostream &os, const std::vector<ResultRow> &rows);
std::string format_double(double v); // shortest round-trip

nlohmann::json config_to_json(const ExperimentConfig &cfg);
nlohmann::json make_manifest(const ExperimentConfig &cfg, const std::string &command, std::size_t rows);

// <out> gets the CSV, <out>.manifest.json the manifest.
std::filesystem::path manifest_path(const std::filesystem::path &csv);

std::vector<ResultRow> run_sweep(const ExperimentConfig &cfg, Execution exec = Execution::parallel);
std::vector<ResultRow> run_overhead(const ExperimentConfig &cfg, Execution exec = Execution::parallel);

nlohmann::json instance_to_json(const NetworkInstance &inst);
NetworkInstance instance_from_json(const nlohmann::json &j);
nlohmann::json sic_to_json(const SicMatrix &sic);
SicMatrix sic_from_json(const nlohmann::json &j);
nlohmann::json beams_to_json(const BeamformingSolution &beams);

} // namespace noma
