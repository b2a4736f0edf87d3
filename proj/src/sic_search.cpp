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

#include "noma/sic_search.hpp"
#include "noma/channel.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace noma {

void SearchConfig::check() const
{
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::invalid_argument("tau must lie in [0,1]");
    if (exhaustive_limit < 1)
        throw std::invalid_argument("exhaustive_limit must be >= 1");
    if (flip_budget < 0)
        throw std::invalid_argument("flip_budget must be non-negative");
    inner_opt.check();
}

CandidateScore evaluate_candidate(const NetworkInstance &inst, const SicMatrix &sic, const OptimizerConfig &opt)
{
    auto res = optimize_beams(inst, sic, zf_init(inst), opt);
    return {res.sum_rate, std::move(res.beams), res.iterations};
}

std::vector<CandidateScore> evaluate_candidates(const NetworkInstance &inst, std::span<const SicMatrix> candidates,
                                                const OptimizerConfig &opt, Execution exec)
{
    std::vector<CandidateScore> out(candidates.size());
    for_each_index(exec, candidates.size(),
                   [&](std::size_t c) { out[c] = evaluate_candidate(inst, candidates[c], opt); });
    return out;
}

std::vector<SicMatrix> enumerate_sic_matrices(int users)
{
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < users; ++i)
        for (int k = i + 1; k < users; ++k)
            pairs.emplace_back(i, k);
    std::size_t total = 1;
    for (std::size_t p = 0; p < pairs.size(); ++p)
        total *= 3;

    std::vector<SicMatrix> out;
    out.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        SicMatrix d(users);
        std::size_t rest = code;
        for (const auto &[i, k] : pairs) {
            const auto state = rest % 3;
            rest /= 3;
            if (state == 1)
                d.set(i, k);
            else if (state == 2)
                d.set(k, i);
        }
        out.push_back(std::move(d));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Index of the best score; ties resolve to the earliest candidate.
std::size_t stable_argmax(const std::vector<CandidateScore> &scores)
{
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
        if (scores[c].sum_rate > scores[best].sum_rate)
            best = c;
    return best;
}

} // namespace

SearchResult exhaustive_search(const NetworkInstance &inst, const SearchConfig &cfg, Execution exec)
{
    cfg.check();
    if (inst.num_cells != 1)
        throw std::invalid_argument("exhaustive_search needs a single-cell instance");
    const int K = inst.num_users();
    if (K > cfg.exhaustive_limit)
        throw std::invalid_argument("exhaustive_search: " + std::to_string(K) + " users exceeds the limit of " +
                                    std::to_string(cfg.exhaustive_limit));

    const auto candidates = enumerate_sic_matrices(K);
    auto scores = evaluate_candidates(inst, candidates, cfg.inner_opt, exec);
    const std::size_t best = stable_argmax(scores);

    SearchResult res;
    res.sic = candidates[best];
    res.beams = std::move(scores[best].beams);
    res.sum_rate = scores[best].sum_rate;
    res.candidates_evaluated = static_cast<int>(candidates.size());
    for (const auto &s : scores)
        res.optimizer_iterations += s.iterations;
    return res;
}

SicMatrix greedy_correlation(const NetworkInstance &inst, const SearchConfig &cfg)
{
    cfg.check();
    SicMatrix d(inst.num_users());
    for (int c = 0; c < inst.num_cells; ++c) {
        const auto users = inst.users_in(c);
        const auto order = strength_order(inst, users); // strongest first
        for (std::size_t s = 0; s < order.size(); ++s)
            for (std::size_t w = s + 1; w < order.size(); ++w)
                if (pairwise_correlation(inst.data(order[s]), inst.data(order[w])) > cfg.tau)
                    d.set(order[w], order[s]);
    }
    return d;
}

std::vector<SicMatrix> neighbourhood(const NetworkInstance &inst, const SicMatrix &sic)
{
    std::vector<SicMatrix> out;
    for (int c = 0; c < inst.num_cells; ++c) {
        const auto users = inst.users_in(c);
        for (std::size_t a = 0; a < users.size(); ++a)
            for (std::size_t b = a + 1; b < users.size(); ++b) {
                const int i = users[a];
                const int k = users[b];
                const int state = sic(i, k) ? 1 : sic(k, i) ? 2 : 0;
                for (int next = 0; next < 3; ++next) {
                    if (next == state)
                        continue;
                    SicMatrix d = sic;
                    d.set(i, k, next == 1);
                    d.set(k, i, next == 2);
                    out.push_back(std::move(d));
                }
            }
    }
    return out;
}

SearchResult local_search(const NetworkInstance &inst, const SicMatrix &start, const SearchConfig &cfg,
                          Execution exec)
{
    cfg.check();
    require_valid(start, inst);

    std::map<std::vector<std::uint8_t>, CandidateScore> cache;
    SearchResult res;

    // Scores every matrix not yet cached; cached entries are reused.
    auto score_all = [&](const std::vector<SicMatrix> &cands) {
        std::vector<SicMatrix> fresh;
        for (const auto &d : cands)
            if (!cache.contains(d.raw()) &&
                std::find(fresh.begin(), fresh.end(), d) == fresh.end())
                fresh.push_back(d);
        auto scores = evaluate_candidates(inst, fresh, cfg.inner_opt, exec);
        for (std::size_t f = 0; f < fresh.size(); ++f) {
            res.optimizer_iterations += scores[f].iterations;
            cache.emplace(fresh[f].raw(), std::move(scores[f]));
        }
        res.candidates_evaluated += static_cast<int>(fresh.size());
    };

    const SicMatrix zero(inst.num_users());
    score_all({start, zero});
    SicMatrix cur = cache.at(start.raw()).sum_rate >= cache.at(zero.raw()).sum_rate ? start : zero;
    double cur_rate = cache.at(cur.raw()).sum_rate;

    while (res.accepted_moves < cfg.flip_budget) {
        const auto moves = neighbourhood(inst, cur);
        if (moves.empty())
            break;
        score_all(moves);
        res.moves_per_step.push_back(static_cast<int>(moves.size()));
        std::size_t best = 0;
        for (std::size_t m = 1; m < moves.size(); ++m)
            if (cache.at(moves[m].raw()).sum_rate > cache.at(moves[best].raw()).sum_rate)
                best = m;
        const double best_rate = cache.at(moves[best].raw()).sum_rate;
        if (!(best_rate > cur_rate))
            break;
        cur = moves[best];
        cur_rate = best_rate;
        ++res.accepted_moves;
    }

    res.sic = cur;
    res.beams = cache.at(cur.raw()).beams;
    res.sum_rate = cur_rate;
    return res;
}

} // namespace noma
