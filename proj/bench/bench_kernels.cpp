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
// Serial reference vs OpenMP kernels.

#include "noma/channel.hpp"
#include "noma/harness.hpp"
#include "noma/sic_search.hpp"

#include <benchmark/benchmark.h>

using namespace noma;

namespace {

Execution mode(const benchmark::State &state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_EvaluateCandidates(benchmark::State &state)
{
    ChannelGenConfig g;
    g.corr_target = 0.7;
    g.seed = 11;
    const auto inst = generate_single_cell(3, 4, g);
    const auto cands = enumerate_sic_matrices(3);
    OptimizerConfig opt;
    opt.max_iters = 50;
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_candidates(inst, cands, opt, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(cands.size()));
}

void BM_LocalSearch(benchmark::State &state)
{
    ChannelGenConfig g;
    g.corr_target = 0.7;
    g.seed = 5;
    const auto inst = generate_multi_cell(3, 6, 4, g);
    SearchConfig cfg;
    cfg.inner_opt.max_iters = 30;
    const auto start = greedy_correlation(inst, cfg);
    for (auto _ : state)
        benchmark::DoNotOptimize(local_search(inst, start, cfg, mode(state)));
}

void BM_Sweep(benchmark::State &state)
{
    ExperimentConfig cfg;
    cfg.trials = 4;
    cfg.corr = {0.3, 0.7};
    cfg.schemes = {SchemeSdma{}, SchemeCbNoma{}, SchemeClusterFree{SearchStrategy::greedy}};
    cfg.opt.max_iters = 50;
    cfg.deterministic_timing = true;
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep_rows(cfg, mode(state)));
}

} // namespace

BENCHMARK(BM_EvaluateCandidates)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LocalSearch)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

int main(int argc, char **argv)
{
    apply_thread_cap();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv))
        return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
