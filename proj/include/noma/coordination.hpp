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
#include "noma/overhead.hpp"
#include "noma/sic.hpp"

#include <vector>

namespace noma {

// SIC matrix of one cell, re-indexed to that cell's local user numbers.
SicMatrix restrict_to_cell(const SicMatrix &sic, const NetworkInstance &inst, int cell);

struct CentralizedResult
{
    BeamformingSolution beams;
    OverheadLedger ledger;
    BeamOptResult opt;
};

// Round 1: every BS uploads all of its BS-to-user channels (K N_t complex).
// The centre optimises jointly. Round 2: each BS receives its own beams.
CentralizedResult centralized_optimize(const NetworkInstance &inst, const SicMatrix &sic, const OptimizerConfig &cfg);

struct DistributedResult
{
    BeamformingSolution beams;
    OverheadLedger ledger;
    std::vector<double> sum_rate_trace; // global true sum rate after each round
    long optimizer_iterations = 0;
};

// Interference-freeze fixed point. Each round, every BS tells every other BS
// the interference power it imposes on each of the receiver's users (K_c
// reals), then all BSs re-optimise their own cell against the frozen values.
// Messages of round r are built from the state after round r - 1.
DistributedResult distributed_optimize(const NetworkInstance &inst, const SicMatrix &sic, int rounds,
                                       const OptimizerConfig &cfg);

} // namespace noma
