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

#include "noma/harness.hpp"
#include "noma/channel.hpp"
#include "noma/coordination.hpp"
#include "noma/gnn.hpp"
#include "noma/rng.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <tuple>

namespace noma {

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t corr_index, int trial)
{
    return mix_seed(base_seed, {static_cast<std::uint64_t>(corr_index), static_cast<std::uint64_t>(trial)});
}

NetworkInstance make_instance(const ExperimentConfig &cfg, double corr, std::uint64_t seed)
{
    ChannelGenConfig gen;
    gen.corr_target = corr;
    gen.cross_cell_gain = cfg.cross_gain;
    gen.seed = seed;
    gen.noise_power = cfg.noise_power;
    gen.power_budget = cfg.power_budget;
    return generate_multi_cell(cfg.cells, cfg.users_per_cell, cfg.antennas, gen);
}

namespace {

SchemeOutcome optimized(const NetworkInstance &inst, SicMatrix sic, const OptimizerConfig &opt)
{
    auto res = optimize_beams(inst, sic, zf_init(inst), opt);
    return {std::move(sic), std::move(res.beams), res.sum_rate, res.iterations};
}

// Re-optimise the searched matrix and the all-zero matrix with the full
// optimiser budget; the searched matrix wins ties.
SchemeOutcome polish(const NetworkInstance &inst, const SearchResult &found, const OptimizerConfig &opt)
{
    SchemeOutcome best = optimized(inst, found.sic, opt);
    SchemeOutcome zero = optimized(inst, SicMatrix(inst.num_users()), opt);
    const long spent = found.optimizer_iterations + best.iterations + zero.iterations;
    if (zero.sum_rate > best.sum_rate)
        best = std::move(zero);
    best.iterations = spent;
    return best;
}

} // namespace

SchemeOutcome evaluate_scheme(const NetworkInstance &inst, const Scheme &scheme, const ExperimentConfig &cfg,
                              Execution exec)
{
    if (std::holds_alternative<SchemeSdma>(scheme))
        return optimized(inst, scheme_sdma(inst.num_users()), cfg.opt);
    if (std::holds_alternative<SchemeBbNoma>(scheme))
        return optimized(inst, scheme_bb_noma(inst), cfg.opt);
    if (const auto *cb = std::get_if<SchemeCbNoma>(&scheme)) {
        auto res = scheme_cb_noma(inst, cb->clusters);
        const double rate = rate_report(inst, res.sic, res.beams).sum_rate;
        return {std::move(res.sic), std::move(res.beams), rate, 0};
    }
    const auto &cf = std::get<SchemeClusterFree>(scheme);
    switch (cf.strategy) {
    case SearchStrategy::greedy: return optimized(inst, greedy_correlation(inst, cfg.search), cfg.opt);
    case SearchStrategy::exhaustive: return polish(inst, exhaustive_search(inst, cfg.search, exec), cfg.opt);
    case SearchStrategy::greedy_local:
        break;
    }
    const SicMatrix start = greedy_correlation(inst, cfg.search);
    return polish(inst, local_search(inst, start, cfg.search, exec), cfg.opt);
}

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

void sort_rows(std::vector<ResultRow> &rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow &a, const ResultRow &b) {
        return std::tie(a.corr, a.trial, a.scheme) < std::tie(b.corr, b.trial, b.scheme);
    });
}

void write_csv(std::ostream &os, const std::vector<ResultRow> &rows)
{
    os << kCsvHeader << '\n';
    for (const auto &r : rows)
        os << format_double(r.corr) << ',' << r.scheme << ',' << r.trial << ',' << r.seed << ','
           << format_double(r.sum_rate) << ',' << r.iterations << ',' << format_double(r.wall_ms) << ','
           << r.overhead_bits << '\n';
}

namespace {

struct Task
{
    std::size_t corr_index;
    int trial;
};

std::vector<Task> tasks_of(const ExperimentConfig &cfg)
{
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cfg.corr.size(); ++c)
        for (int t = 0; t < cfg.trials; ++t)
            tasks.push_back({c, t});
    return tasks;
}

double elapsed_ms(std::chrono::steady_clock::time_point since, const ExperimentConfig &cfg)
{
    if (cfg.deterministic_timing)
        return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

template <class PerTask>
std::vector<ResultRow> run_tasks(const ExperimentConfig &cfg, Execution exec, PerTask per_task)
{
    const auto tasks = tasks_of(cfg);
    std::vector<std::vector<ResultRow>> per(tasks.size());
    for_each_index(exec, tasks.size(), [&](std::size_t n) { per[n] = per_task(tasks[n]); });
    std::vector<ResultRow> rows;
    for (auto &v : per)
        for (auto &r : v)
            rows.push_back(std::move(r));
    sort_rows(rows);
    return rows;
}

} // namespace

std::vector<ResultRow> sweep_rows(const ExperimentConfig &cfg, Execution exec)
{
    validate(cfg);
    // Joint optimisation of several cells implies central CSI collection.
    const std::int64_t bits =
        cfg.cells > 1 ? centralized_overhead_closed_form(cfg.cells, cfg.antennas, cfg.users_per_cell) : 0;
    return run_tasks(cfg, exec, [&](const Task &task) {
        const double corr = cfg.corr[task.corr_index];
        const std::uint64_t seed = trial_seed(cfg.seed, task.corr_index, task.trial);
        const NetworkInstance inst = make_instance(cfg, corr, seed);
        std::vector<ResultRow> rows;
        for (const auto &scheme : cfg.schemes) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto out = evaluate_scheme(inst, scheme, cfg, Execution::serial);
            rows.push_back({corr, scheme_name(scheme), task.trial, seed, out.sum_rate, out.iterations,
                            elapsed_ms(t0, cfg), bits});
        }
        return rows;
    });
}

std::vector<ResultRow> overhead_rows(const ExperimentConfig &cfg, Execution exec)
{
    validate(cfg);
    const GnnWeights weights = cfg.gnn_weights.empty()
                                   ? GnnWeights::random(cfg.gnn, cfg.users_per_cell, cfg.antennas, cfg.seed)
                                   : load_weights(cfg.gnn_weights);
    weights.check(cfg.gnn, cfg.users_per_cell, cfg.antennas);

    return run_tasks(cfg, exec, [&](const Task &task) {
        const double corr = cfg.corr[task.corr_index];
        const std::uint64_t seed = trial_seed(cfg.seed, task.corr_index, task.trial);
        const NetworkInstance inst = make_instance(cfg, corr, seed);
        const SicMatrix sic = greedy_correlation(inst, cfg.search);
        std::vector<ResultRow> rows;

        auto t0 = std::chrono::steady_clock::now();
        const auto central = centralized_optimize(inst, sic, cfg.opt);
        rows.push_back({corr, "centralized", task.trial, seed, central.opt.sum_rate, central.opt.iterations,
                        elapsed_ms(t0, cfg), central.ledger.total_bits});

        t0 = std::chrono::steady_clock::now();
        const auto dist = distributed_optimize(inst, sic, cfg.rounds, cfg.opt);
        rows.push_back({corr, "distributed", task.trial, seed, dist.sum_rate_trace.back(), dist.optimizer_iterations,
                        elapsed_ms(t0, cfg), dist.ledger.total_bits});

        t0 = std::chrono::steady_clock::now();
        const auto gnn = gnn_forward(inst, cfg.gnn, weights);
        rows.push_back({corr, "gnn", task.trial, seed, rate_report(inst, sic, gnn.beams).sum_rate, cfg.gnn.depth,
                        elapsed_ms(t0, cfg), gnn.ledger.total_bits});
        return rows;
    });
}

nlohmann::json config_to_json(const ExperimentConfig &cfg)
{
    nlohmann::json schemes = nlohmann::json::array();
    for (const auto &s : cfg.schemes)
        schemes.push_back(scheme_name(s));
    return {
        {"cells", cfg.cells},
        {"users", cfg.users_per_cell},
        {"antennas", cfg.antennas},
        {"corr", cfg.corr},
        {"cross_gain", cfg.cross_gain},
        {"schemes", schemes},
        {"trials", cfg.trials},
        {"seed", cfg.seed},
        {"noise_power", cfg.noise_power},
        {"power_budget", cfg.power_budget},
        {"optimizer",
         {{"beta", cfg.opt.beta},
          {"max_iters", cfg.opt.max_iters},
          {"refresh_period", cfg.opt.order_refresh_period},
          {"step_init", cfg.opt.step_init},
          {"armijo_c", cfg.opt.armijo_c},
          {"backtrack_factor", cfg.opt.backtrack_factor},
          {"tol", cfg.opt.tol},
          {"grad_mode", cfg.opt.grad_mode == GradMode::analytic ? "analytic" : "finite_difference"}}},
        {"search",
         {{"tau", cfg.search.tau},
          {"exhaustive_limit", cfg.search.exhaustive_limit},
          {"inner_max_iters", cfg.search.inner_opt.max_iters},
          {"flip_budget", cfg.search.flip_budget}}},
        {"rounds", cfg.rounds},
        {"gnn",
         {{"depth", cfg.gnn.depth},
          {"embed", cfg.gnn.embed_size},
          {"hidden", cfg.gnn.hidden_width},
          {"aggregation", to_string(cfg.gnn.aggregation)},
          {"weights", cfg.gnn_weights.string()}}},
        {"out", cfg.out.string()},
        {"deterministic_timing", cfg.deterministic_timing},
    };
}

nlohmann::json make_manifest(const ExperimentConfig &cfg, const std::string &command, std::size_t rows)
{
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {
        {"tool", "noma-forge"},
        {"version", NOMA_FORGE_VERSION},
        {"command", command},
        {"timestamp", stamp},
        {"csv_header", kCsvHeader},
        {"rows", rows},
        {"config", config_to_json(cfg)},
    };
}

std::filesystem::path manifest_path(const std::filesystem::path &csv)
{
    auto p = csv;
    p += ".manifest.json";
    return p;
}

namespace {

void persist(const ExperimentConfig &cfg, const std::string &command, const std::vector<ResultRow> &rows)
{
    std::ofstream os(cfg.out);
    if (!os)
        throw std::runtime_error("cannot write '" + cfg.out.string() + "'");
    write_csv(os, rows);
    os.close();
    if (!os)
        throw std::runtime_error("failed writing '" + cfg.out.string() + "'");
    std::ofstream ms(manifest_path(cfg.out));
    if (!ms)
        throw std::runtime_error("cannot write '" + manifest_path(cfg.out).string() + "'");
    ms << make_manifest(cfg, command, rows.size()).dump(2) << '\n';
}

} // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig &cfg, Execution exec)
{
    auto rows = sweep_rows(cfg, exec);
    persist(cfg, "sweep", rows);
    return rows;
}

std::vector<ResultRow> run_overhead(const ExperimentConfig &cfg, Execution exec)
{
    auto rows = overhead_rows(cfg, exec);
    persist(cfg, "overhead", rows);
    return rows;
}

// ---- instance / matrix serialisation ----

nlohmann::json instance_to_json(const NetworkInstance &inst)
{
    nlohmann::json links = nlohmann::json::array();
    for (int b = 0; b < inst.num_cells; ++b) {
        nlohmann::json row = nlohmann::json::array();
        for (int u = 0; u < inst.num_users(); ++u) {
            nlohmann::json v = nlohmann::json::array();
            for (const auto &z : inst.link(b, u))
                v.push_back({z.real(), z.imag()});
            row.push_back(std::move(v));
        }
        links.push_back(std::move(row));
    }
    return {
        {"format", "noma-instance-1"},
        {"num_cells", inst.num_cells},
        {"antennas", inst.antennas},
        {"users_per_cell", inst.users_per_cell},
        {"noise_power", inst.noise_power},
        {"power_budget", inst.power_budget},
        {"seed", inst.seed},
        {"cell_of", inst.cell_of},
        {"channel", std::move(links)},
    };
}

NetworkInstance instance_from_json(const nlohmann::json &j)
{
    if (j.value("format", "") != "noma-instance-1")
        throw std::runtime_error("instance JSON: unsupported format");
    NetworkInstance inst;
    inst.num_cells = j.at("num_cells").get<int>();
    inst.antennas = j.at("antennas").get<int>();
    inst.users_per_cell = j.at("users_per_cell").get<int>();
    inst.noise_power = j.at("noise_power").get<double>();
    inst.power_budget = j.at("power_budget").get<double>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.cell_of = j.at("cell_of").get<std::vector<int>>();
    const auto &links = j.at("channel");
    for (const auto &row : links)
        for (const auto &v : row) {
            CVec h(static_cast<Eigen::Index>(v.size()));
            for (std::size_t a = 0; a < v.size(); ++a)
                h[static_cast<Eigen::Index>(a)] = cplx(v[a].at(0).get<double>(), v[a].at(1).get<double>());
            inst.channel.push_back(std::move(h));
        }
    inst.check();
    return inst;
}

nlohmann::json sic_to_json(const SicMatrix &sic)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < sic.size(); ++i) {
        std::vector<int> r(static_cast<std::size_t>(sic.size()));
        for (int k = 0; k < sic.size(); ++k)
            r[static_cast<std::size_t>(k)] = sic(i, k) ? 1 : 0;
        rows.push_back(r);
    }
    return rows;
}

SicMatrix sic_from_json(const nlohmann::json &j)
{
    const int K = static_cast<int>(j.size());
    SicMatrix sic(K);
    for (int i = 0; i < K; ++i) {
        const auto &row = j.at(static_cast<std::size_t>(i));
        if (static_cast<int>(row.size()) != K)
            throw std::runtime_error("SIC matrix JSON must be square");
        for (int k = 0; k < K; ++k) {
            const int v = row.at(static_cast<std::size_t>(k)).get<int>();
            if (v != 0 && v != 1)
                throw std::runtime_error("SIC matrix entries must be 0 or 1");
            sic.set(i, k, v == 1);
        }
    }
    return sic;
}

nlohmann::json beams_to_json(const BeamformingSolution &beams)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto &w : beams.w) {
        nlohmann::json v = nlohmann::json::array();
        for (const auto &z : w)
            v.push_back({z.real(), z.imag()});
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace noma
