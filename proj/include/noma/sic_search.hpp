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
#include "noma/parallel.hpp"
#include "noma/sic.hpp"

#include <span>
#include <vector>

namespace noma {

struct SearchConfig
{
    double tau = 0.5;         // correlation threshold for greedy SIC edges
    int exhaustive_limit = 4; // max users for exhaustive enumeration
    OptimizerConfig inner_opt = [] {
        OptimizerConfig c;
        c.max_iters = 100;
        return c;
    }();
    int flip_budget = 200; // accepted local-search moves

    void check() const;
};

// Sum rate of one SIC matrix after beam optimisation from ZF init.
struct CandidateScore
{
    double sum_rate = 0.0;
    BeamformingSolution beams;
    int iterations = 0;
};

struct SearchResult
{
    SicMatrix sic;
    BeamformingSolution beams;
    double sum_rate = 0.0;
    int candidates_evaluated = 0;
    int accepted_moves = 0;
    long optimizer_iterations = 0;
    std::vector<int> moves_per_step; // local search only
};

CandidateScore evaluate_candidate(const NetworkInstance &inst, const SicMatrix &sic, const OptimizerConfig &opt);

// Independent evaluations, in input order.
std::vector<CandidateScore> evaluate_candidates(const NetworkInstance &inst, std::span<const SicMatrix> candidates,
                                                const OptimizerConfig &opt, Execution exec = Execution::parallel);

// All 3^(K(K-1)/2) valid matrices of a single-cell instance, in ascending
// lexicographic order.
std::vector<SicMatrix> enumerate_sic_matrices(int users);

SearchResult exhaustive_search(const NetworkInstance &inst, const SearchConfig &cfg,
                               Execution exec = Execution::parallel);

// d[weaker][stronger] = 1 for every intra-cell pair with correlation > tau.
SicMatrix greedy_correlation(const NetworkInstance &inst, const SearchConfig &cfg);

// Steepest-ascent over single-pair state changes. The start pool holds D0 and
// the all-zero matrix (D0 wins ties).
SearchResult local_search(const NetworkInstance &inst, const SicMatrix &start, const SearchConfig &cfg,
                          Execution exec = Execution::parallel);

// Single-pair moves from `sic`: for each intra-cell pair (i < k), the two
// other states among {none, i->k, k->i}.
std::vector<SicMatrix> neighbourhood(const NetworkInstance &inst, const SicMatrix &sic);

} // namespace noma
