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
// noma_forge: command-line front end.

#include "noma/beamforming.hpp"
#include "noma/channel.hpp"
#include "noma/config.hpp"
#include "noma/harness.hpp"
#include "noma/sic_search.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace noma;

namespace {

struct Options
{
    std::optional<std::string> config;
    std::vector<Setting> overrides;
    std::string instance;
    std::string sic;
    std::string strategy = "local";
    bool deterministic = false;
};

// Flags that map one-to-one onto config keys.
void add_config_flags(CLI::App &app, Options &o)
{
    app.add_option_function<std::string>("--config", [&o](const std::string &p) { o.config = p; },
                                         "key=value config file");
    const std::pair<const char *, const char *> flags[] = {
        {"--out", "out"},           {"--seed", "seed"},         {"--trials", "trials"},
        {"--corr", "corr"},         {"--schemes", "schemes"},   {"--cells", "cells"},
        {"--users", "users"},       {"--antennas", "antennas"}, {"--rounds", "rounds"},
        {"--gnn-depth", "gnn_depth"}, {"--gnn-embed", "gnn_embed"}, {"--tau", "tau"},
        {"--max-iters", "max_iters"}, {"--threads", "threads"}, {"--gnn-weights", "gnn_weights"},
    };
    for (const auto &[flag, key] : flags) {
        const std::string k = key;
        app.add_option_function<std::string>(flag, [&o, k](const std::string &v) { o.overrides.emplace_back(k, v); },
                                             "sets '" + k + "'");
    }
    app.add_flag("--deterministic", o.deterministic, "write wall_ms as 0");
}

ExperimentConfig load(const Options &o)
{
    auto overrides = o.overrides;
    if (o.deterministic)
        overrides.emplace_back("deterministic_timing", "true");
    std::optional<std::filesystem::path> file;
    if (o.config)
        file = *o.config;
    return parse_config(file, overrides);
}

bool has_override(const Options &o, const std::string &key)
{
    for (const auto &[k, v] : o.overrides)
        if (k == key)
            return true;
    return false;
}

nlohmann::json read_json(const std::string &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open '" + path + "'");
    return nlohmann::json::parse(is);
}

// Instance from --instance, else generated from the config (first corr value).
NetworkInstance instance_for(const Options &o, const ExperimentConfig &cfg)
{
    if (!o.instance.empty())
        return instance_from_json(read_json(o.instance));
    return make_instance(cfg, cfg.corr.front(), cfg.seed);
}

void emit(const nlohmann::json &j, const ExperimentConfig &cfg, const Options &o)
{
    if (has_override(o, "out")) {
        std::ofstream os(cfg.out);
        if (!os)
            throw std::runtime_error("cannot open '" + cfg.out.string() + "' for writing");
        os << j.dump(2) << '\n';
    } else {
        std::cout << j.dump(2) << '\n';
    }
}

nlohmann::json rates_json(const RateReport &rep)
{
    return {{"sum_rate", rep.sum_rate}, {"achievable_rate", rep.achievable_rate}};
}

int run_gen(const Options &o)
{
    const auto cfg = load(o);
    emit(instance_to_json(make_instance(cfg, cfg.corr.front(), cfg.seed)), cfg, o);
    return 0;
}

int run_eval(const Options &o)
{
    const auto cfg = load(o);
    const auto inst = instance_for(o, cfg);
    nlohmann::json out = nlohmann::json::array();
    for (const auto &scheme : cfg.schemes) {
        const auto res = evaluate_scheme(inst, scheme, cfg, Execution::parallel);
        auto j = rates_json(rate_report(inst, res.sic, res.beams));
        j["scheme"] = scheme_name(scheme);
        j["iterations"] = res.iterations;
        j["sic"] = sic_to_json(res.sic);
        out.push_back(std::move(j));
    }
    emit(out, cfg, o);
    return 0;
}

int run_opt(const Options &o)
{
    const auto cfg = load(o);
    const auto inst = instance_for(o, cfg);
    const SicMatrix d = o.sic.empty() ? SicMatrix(inst.num_users()) : sic_from_json(read_json(o.sic));
    const auto res = optimize_beams(inst, d, zf_init(inst), cfg.opt);
    auto j = rates_json(rate_report(inst, d, res.beams));
    j["iterations"] = res.iterations;
    j["beams"] = beams_to_json(res.beams);
    emit(j, cfg, o);
    return 0;
}

int run_search(const Options &o)
{
    const auto cfg = load(o);
    const auto inst = instance_for(o, cfg);
    SearchResult res;
    if (o.strategy == "exhaustive") {
        res = exhaustive_search(inst, cfg.search);
    } else if (o.strategy == "greedy") {
        res.sic = greedy_correlation(inst, cfg.search);
        const auto score = evaluate_candidate(inst, res.sic, cfg.search.inner_opt);
        res.beams = score.beams;
        res.sum_rate = score.sum_rate;
        res.candidates_evaluated = 1;
    } else if (o.strategy == "local") {
        res = local_search(inst, greedy_correlation(inst, cfg.search), cfg.search);
    } else {
        throw ConfigError("strategy", 0, "strategy: expected greedy, local or exhaustive");
    }
    nlohmann::json j = {
        {"strategy", o.strategy},
        {"sum_rate", res.sum_rate},
        {"sic", sic_to_json(res.sic)},
        {"candidates_evaluated", res.candidates_evaluated},
        {"accepted_moves", res.accepted_moves},
        {"beams", beams_to_json(res.beams)},
    };
    emit(j, cfg, o);
    return 0;
}

int run_table(const Options &o, bool overhead)
{
    auto cfg = load(o);
    if (overhead && !has_override(o, "out") && !o.config)
        cfg.out = "overhead.csv";
    apply_thread_cap(cfg.threads);
    const auto rows = overhead ? run_overhead(cfg) : run_sweep(cfg);
    std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), cfg.out.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"noma_forge: cluster-free multi-antenna NOMA simulator"};
    app.set_version_flag("--version", NOMA_FORGE_VERSION);
    app.require_subcommand(1);

    Options o;
    auto *gen = app.add_subcommand("gen", "write one generated instance as JSON");
    auto *eval = app.add_subcommand("eval", "evaluate schemes on one instance");
    auto *opt = app.add_subcommand("opt", "optimise beams for a fixed SIC matrix");
    auto *search = app.add_subcommand("search", "search for a SIC matrix");
    auto *sweep = app.add_subcommand("sweep", "correlation sweep to CSV");
    auto *overhead = app.add_subcommand("overhead", "coordination overhead sweep to CSV");
    for (auto *sub : {gen, eval, opt, search, sweep, overhead})
        add_config_flags(*sub, o);
    for (auto *sub : {eval, opt, search})
        sub->add_option("--instance", o.instance, "instance JSON from 'gen'");
    opt->add_option("--sic", o.sic, "SIC matrix JSON (default: all zero)");
    search->add_option("--strategy", o.strategy, "greedy, local or exhaustive");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        apply_thread_cap();
        if (gen->parsed())
            return run_gen(o);
        if (eval->parsed())
            return run_eval(o);
        if (opt->parsed())
            return run_opt(o);
        if (search->parsed())
            return run_search(o);
        if (sweep->parsed())
            return run_table(o, false);
        return run_table(o, true);
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
