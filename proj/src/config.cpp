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

#include "noma/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace noma {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        out.push_back(trim(item));
    return out;
}

struct Where
{
    std::string key;
    int line;

    [[noreturn]] void fail(const std::string &msg) const
    {
        const std::string prefix = line > 0 ? "line " + std::to_string(line) + ": " : "";
        throw ConfigError(key, line, prefix + key + ": " + msg);
    }
};

template <class T>
T parse_number(const std::string &text, const Where &where)
{
    T v{};
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size())
        where.fail("'" + text + "' is not a valid number");
    return v;
}

bool parse_bool(const std::string &text, const Where &where)
{
    if (text == "1" || text == "true" || text == "yes" || text == "on")
        return true;
    if (text == "0" || text == "false" || text == "no" || text == "off")
        return false;
    where.fail("'" + text + "' is not a boolean");
}

// Embedding sizes are resolved against depth once all settings are in.
struct Pending
{
    std::vector<int> embed;
};

using Handler = std::function<void(ExperimentConfig &, Pending &, const std::string &, const Where &)>;

const std::vector<std::pair<std::string, Handler>> &handlers()
{
    static const std::vector<std::pair<std::string, Handler>> table = {
        {"cells", [](auto &c, auto &, auto &v, auto &w) { c.cells = parse_number<int>(v, w); }},
        {"users", [](auto &c, auto &, auto &v, auto &w) { c.users_per_cell = parse_number<int>(v, w); }},
        {"antennas", [](auto &c, auto &, auto &v, auto &w) { c.antennas = parse_number<int>(v, w); }},
        {"corr",
         [](auto &c, auto &, auto &v, auto &w) {
             c.corr.clear();
             for (const auto &item : split_list(v))
                 c.corr.push_back(parse_number<double>(item, w));
         }},
        {"cross_gain", [](auto &c, auto &, auto &v, auto &w) { c.cross_gain = parse_number<double>(v, w); }},
        {"schemes",
         [](auto &c, auto &, auto &v, auto &w) {
             c.schemes.clear();
             for (const auto &item : split_list(v)) {
                 try {
                     c.schemes.push_back(parse_scheme(item));
                 } catch (const std::invalid_argument &e) {
                     w.fail(e.what());
                 }
             }
         }},
        {"trials", [](auto &c, auto &, auto &v, auto &w) { c.trials = parse_number<int>(v, w); }},
        {"seed", [](auto &c, auto &, auto &v, auto &w) { c.seed = parse_number<std::uint64_t>(v, w); }},
        {"noise_power", [](auto &c, auto &, auto &v, auto &w) { c.noise_power = parse_number<double>(v, w); }},
        {"power_budget", [](auto &c, auto &, auto &v, auto &w) { c.power_budget = parse_number<double>(v, w); }},
        {"beta", [](auto &c, auto &, auto &v, auto &w) { c.opt.beta = parse_number<double>(v, w); }},
        {"max_iters", [](auto &c, auto &, auto &v, auto &w) { c.opt.max_iters = parse_number<int>(v, w); }},
        {"refresh_period",
         [](auto &c, auto &, auto &v, auto &w) { c.opt.order_refresh_period = parse_number<int>(v, w); }},
        {"step_init", [](auto &c, auto &, auto &v, auto &w) { c.opt.step_init = parse_number<double>(v, w); }},
        {"armijo_c", [](auto &c, auto &, auto &v, auto &w) { c.opt.armijo_c = parse_number<double>(v, w); }},
        {"backtrack_factor",
         [](auto &c, auto &, auto &v, auto &w) { c.opt.backtrack_factor = parse_number<double>(v, w); }},
        {"tol", [](auto &c, auto &, auto &v, auto &w) { c.opt.tol = parse_number<double>(v, w); }},
        {"grad_mode",
         [](auto &c, auto &, auto &v, auto &w) {
             if (v == "analytic")
                 c.opt.grad_mode = GradMode::analytic;
             else if (v == "finite_difference")
                 c.opt.grad_mode = GradMode::finite_difference;
             else
                 w.fail("expected analytic or finite_difference");
         }},
        {"tau", [](auto &c, auto &, auto &v, auto &w) { c.search.tau = parse_number<double>(v, w); }},
        {"exhaustive_limit",
         [](auto &c, auto &, auto &v, auto &w) { c.search.exhaustive_limit = parse_number<int>(v, w); }},
        {"inner_max_iters",
         [](auto &c, auto &, auto &v, auto &w) { c.search.inner_opt.max_iters = parse_number<int>(v, w); }},
        {"flip_budget", [](auto &c, auto &, auto &v, auto &w) { c.search.flip_budget = parse_number<int>(v, w); }},
        {"rounds", [](auto &c, auto &, auto &v, auto &w) { c.rounds = parse_number<int>(v, w); }},
        {"gnn_depth", [](auto &c, auto &, auto &v, auto &w) { c.gnn.depth = parse_number<int>(v, w); }},
        {"gnn_embed",
         [](auto &, auto &p, auto &v, auto &w) {
             p.embed.clear();
             for (const auto &item : split_list(v))
                 p.embed.push_back(parse_number<int>(item, w));
         }},
        {"gnn_hidden", [](auto &c, auto &, auto &v, auto &w) { c.gnn.hidden_width = parse_number<int>(v, w); }},
        {"gnn_aggregation",
         [](auto &c, auto &, auto &v, auto &w) {
             try {
                 c.gnn.aggregation = parse_aggregation(v);
             } catch (const std::invalid_argument &e) {
                 w.fail(e.what());
             }
         }},
        {"gnn_weights", [](auto &c, auto &, auto &v, auto &) { c.gnn_weights = v; }},
        {"out", [](auto &c, auto &, auto &v, auto &) { c.out = v; }},
        {"deterministic_timing",
         [](auto &c, auto &, auto &v, auto &w) { c.deterministic_timing = parse_bool(v, w); }},
        {"threads", [](auto &c, auto &, auto &v, auto &w) { c.threads = parse_number<int>(v, w); }},
    };
    return table;
}

void apply(ExperimentConfig &cfg, Pending &pending, const std::string &key, const std::string &value, int line)
{
    const Where where{key, line};
    for (const auto &[name, handler] : handlers())
        if (name == key) {
            handler(cfg, pending, value, where);
            return;
        }
    where.fail("unknown key");
}

ExperimentConfig finish(ExperimentConfig cfg, Pending pending, const std::vector<Setting> &overrides)
{
    for (const auto &[k, v] : overrides)
        apply(cfg, pending, k, v, 0);
    if (!pending.embed.empty()) {
        if (pending.embed.size() == 1)
            cfg.gnn.embed_size.assign(static_cast<std::size_t>(std::max(cfg.gnn.depth, 0)), pending.embed.front());
        else
            cfg.gnn.embed_size = pending.embed;
    } else if (cfg.gnn.embed_size.size() != static_cast<std::size_t>(cfg.gnn.depth) && cfg.gnn.depth >= 1) {
        // Depth changed without sizes: repeat the first default size.
        cfg.gnn.embed_size.assign(static_cast<std::size_t>(cfg.gnn.depth), cfg.gnn.embed_size.front());
    }
    validate(cfg);
    return cfg;
}

} // namespace

const std::vector<std::string> &config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto &[name, h] : handlers())
            k.push_back(name);
        return k;
    }();
    return keys;
}

ExperimentConfig parse_config_text(const std::string &text, const std::vector<Setting> &overrides)
{
    ExperimentConfig cfg;
    Pending pending;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", line, "line " + std::to_string(line) + ": expected key=value");
        const std::string key = trim(body.substr(0, eq));
        if (key.empty())
            throw ConfigError("", line, "line " + std::to_string(line) + ": empty key");
        apply(cfg, pending, key, trim(body.substr(eq + 1)), line);
    }
    return finish(std::move(cfg), std::move(pending), overrides);
}

ExperimentConfig parse_config(const std::optional<std::filesystem::path> &file, const std::vector<Setting> &overrides)
{
    if (!file)
        return finish(ExperimentConfig{}, Pending{}, overrides);
    std::ifstream in(*file);
    if (!in)
        throw ConfigError("config", 0, "cannot read config file '" + file->string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), overrides);
}

void validate(const ExperimentConfig &cfg)
{
    auto bad = [](const std::string &field, const std::string &msg) { throw ConfigError(field, 0, field + ": " + msg); };
    if (cfg.cells < 1)
        bad("cells", "must be >= 1");
    if (cfg.users_per_cell < 1)
        bad("users", "must be >= 1");
    if (cfg.antennas < 1)
        bad("antennas", "must be >= 1");
    if (cfg.corr.empty())
        bad("corr", "grid must not be empty");
    for (double r : cfg.corr)
        if (!(r >= 0.0 && r <= 1.0))
            bad("corr", "every value must lie in [0,1]");
    if (!(cfg.cross_gain >= 0.0 && cfg.cross_gain <= 1.0))
        bad("cross_gain", "must lie in [0,1]");
    if (cfg.schemes.empty())
        bad("schemes", "list must not be empty");
    for (const auto &s : cfg.schemes)
        if (const auto *cb = std::get_if<SchemeCbNoma>(&s); cb && cb->clusters > cfg.users_per_cell)
            bad("schemes", "cb_noma cluster count exceeds users per cell");
    if (cfg.trials < 1)
        bad("trials", "must be >= 1");
    if (!(cfg.noise_power > 0.0))
        bad("noise_power", "must be positive");
    if (!(cfg.power_budget > 0.0))
        bad("power_budget", "must be positive");
    if (cfg.rounds < 1)
        bad("rounds", "must be >= 1");
    if (cfg.threads < 0)
        bad("threads", "must be >= 0");
    try {
        cfg.opt.check();
    } catch (const std::invalid_argument &e) {
        bad("optimizer", e.what());
    }
    try {
        cfg.search.check();
    } catch (const std::invalid_argument &e) {
        bad("search", e.what());
    }
    try {
        cfg.gnn.check();
    } catch (const std::invalid_argument &e) {
        bad("gnn", e.what());
    }
}

} // namespace noma
