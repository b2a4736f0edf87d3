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
#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <set>

using namespace noma;
using namespace noma::testing;

namespace {

SearchConfig quick()
{
    SearchConfig c;
    c.inner_opt.max_iters = 30;
    return c;
}

} // namespace

TEST_CASE("enumeration counts and validity")
{
    CHECK(enumerate_sic_matrices(1).size() == 1);
    CHECK(enumerate_sic_matrices(2).size() == 3);
    const auto three = enumerate_sic_matrices(3);
    CHECK(three.size() == 27);
    CHECK(enumerate_sic_matrices(4).size() == 729);

    const auto inst = random_instance(1, 3, 2, 0.5, 1);
    std::set<std::vector<std::uint8_t>> seen;
    for (std::size_t c = 0; c < three.size(); ++c) {
        CHECK(validate(three[c], inst).empty());
        seen.insert(three[c].raw());
        if (c > 0)
            CHECK(three[c - 1] < three[c]);
    }
    CHECK(seen.size() == 27);
    CHECK(three.front().count() == 0);
}

TEST_CASE("exhaustive search")
{
    SUBCASE("two users scores three candidates")
    {
        const auto inst = random_instance(1, 2, 2, 0.8, 3);
        const auto r = exhaustive_search(inst, quick());
        CHECK(r.candidates_evaluated == 3);
        CHECK(validate(r.sic, inst).empty());
    }
    SUBCASE("dominates SDMA and BB-NOMA at high correlation")
    {
        const auto cfg = quick();
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto inst = random_instance(1, 3, 2, 0.95, 600 + s);
            const auto r = exhaustive_search(inst, cfg);
            CHECK(r.candidates_evaluated == 27);
            const double sdma = evaluate_candidate(inst, scheme_sdma(3), cfg.inner_opt).sum_rate;
            const double bb = evaluate_candidate(inst, scheme_bb_noma(inst), cfg.inner_opt).sum_rate;
            CHECK(r.sum_rate >= sdma);
            CHECK(r.sum_rate >= bb);
            CHECK(r.sum_rate == doctest::Approx(rate_report(inst, r.sic, r.beams).sum_rate).epsilon(1e-12));
        }
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(exhaustive_search(random_instance(1, 5, 2, 0.5, 1), quick()), std::invalid_argument);
        CHECK_THROWS_AS(exhaustive_search(random_instance(2, 2, 2, 0.5, 1), quick()), std::invalid_argument);
    }
}

TEST_CASE("greedy correlation")
{
    SUBCASE("tau = 1 gives SDMA, tau = 0 gives full strength chains")
    {
        const auto inst = random_instance(2, 4, 4, 0.5, 9);
        SearchConfig c;
        c.tau = 1.0;
        CHECK(greedy_correlation(inst, c).count() == 0);
        c.tau = 0.0;
        CHECK(greedy_correlation(inst, c) == scheme_bb_noma(inst));
    }
    SUBCASE("collinear pair decodes the weaker at the stronger")
    {
        const auto inst = single_cell({real_vec({1, 1}), real_vec({2, 2}), real_vec({1, -1})});
        const auto d = greedy_correlation(inst, SearchConfig{});
        CHECK(d(0, 1));
        CHECK(d.count() == 1);
    }
    SUBCASE("matches a double-loop oracle")
    {
        for (std::uint64_t s = 0; s < 30; ++s) {
            const auto inst = random_instance(2, 5, 3, 0.5, 100 + s);
            SearchConfig c;
            c.tau = 0.3 + 0.02 * static_cast<double>(s);
            const auto d = greedy_correlation(inst, c);
            for (int i = 0; i < inst.num_users(); ++i)
                for (int k = 0; k < inst.num_users(); ++k) {
                    bool expect = false;
                    if (i != k && inst.cell_of[static_cast<std::size_t>(i)] == inst.cell_of[static_cast<std::size_t>(k)]) {
                        const double ni = inst.data(i).norm(), nk = inst.data(k).norm();
                        const bool k_stronger = nk > ni || (nk == ni && k < i);
                        expect = k_stronger && oracle::correlation(inst.data(i), inst.data(k)) > c.tau;
                    }
                    CHECK(d(i, k) == expect);
                }
        }
    }
    SUBCASE("invariant to per-user phase rotations")
    {
        for (std::uint64_t s = 0; s < 10; ++s) {
            auto inst = random_instance(1, 5, 4, 0.6, 40 + s);
            const auto base = greedy_correlation(inst, SearchConfig{});
            for (int u = 0; u < 5; ++u)
                inst.channel[static_cast<std::size_t>(u)] *= std::polar(1.0, 0.7 * u + 0.1 * static_cast<double>(s));
            CHECK(greedy_correlation(inst, SearchConfig{}) == base);
        }
    }
}

TEST_CASE("neighbourhood")
{
    const auto inst = random_instance(2, 3, 2, 0.5, 2);
    const auto moves = neighbourhood(inst, SicMatrix(6));
    CHECK(moves.size() == 2 * 2 * 3);
    for (const auto &m : moves) {
        CHECK(validate(m, inst).empty());
        CHECK(m.count() == 1);
    }
}

TEST_CASE("local search")
{
    const auto cfg = quick();

    SUBCASE("stays at the exhaustive optimum")
    {
        for (std::uint64_t s = 0; s < 5; ++s) {
            const auto inst = random_instance(1, 3, 2, 0.9, 800 + s);
            const auto ex = exhaustive_search(inst, cfg);
            const auto ls = local_search(inst, ex.sic, cfg);
            CHECK(ls.accepted_moves == 0);
            CHECK(ls.sum_rate == ex.sum_rate);
        }
    }
    SUBCASE("never beats exhaustive; move sets bounded")
    {
        int equal = 0;
        const int runs = 20;
        for (std::uint64_t s = 0; s < runs; ++s) {
            const auto inst = random_instance(1, 3, 2, 0.1 * static_cast<double>(s % 10), 900 + s);
            const auto ex = exhaustive_search(inst, cfg);
            const auto ls = local_search(inst, greedy_correlation(inst, cfg), cfg);
            CHECK(ls.sum_rate <= ex.sum_rate);
            if (ls.sum_rate == ex.sum_rate)
                ++equal;
            for (int m : ls.moves_per_step)
                CHECK(m <= 2 * 3);
            CHECK(validate(ls.sic, inst).empty());
        }
        std::printf("local search matched exhaustive on %d/%d instances\n", equal, runs);
    }
    SUBCASE("dominance chain: exhaustive >= local >= max(greedy, sdma)")
    {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto inst = random_instance(1, 3, 2, 0.7, 1000 + s);
            const auto ex = exhaustive_search(inst, cfg);
            const auto g = greedy_correlation(inst, cfg);
            const auto ls = local_search(inst, g, cfg);
            const double greedy = evaluate_candidate(inst, g, cfg.inner_opt).sum_rate;
            const double sdma = evaluate_candidate(inst, SicMatrix(3), cfg.inner_opt).sum_rate;
            CHECK(ex.sum_rate >= ls.sum_rate);
            CHECK(ls.sum_rate >= greedy);
            CHECK(ls.sum_rate >= sdma);
        }
    }
    SUBCASE("flip budget caps accepted moves")
    {
        auto c = cfg;
        c.flip_budget = 0;
        const auto inst = random_instance(1, 4, 2, 0.9, 5);
        const auto ls = local_search(inst, scheme_bb_noma(inst), c);
        CHECK(ls.accepted_moves == 0);
        CHECK(ls.candidates_evaluated == 2);
    }
    SUBCASE("rejects invalid start")
    {
        const auto inst = random_instance(2, 2, 2, 0.5, 1);
        SicMatrix bad(4);
        bad.set(0, 3);
        CHECK_THROWS_AS(local_search(inst, bad, cfg), std::invalid_argument);
    }
}

TEST_CASE("serial and parallel kernels agree bit for bit")
{
    const auto cfg = quick();
    const auto inst = random_instance(1, 3, 3, 0.6, 77);
    const auto cands = enumerate_sic_matrices(3);
    const auto a = evaluate_candidates(inst, cands, cfg.inner_opt, Execution::serial);
    const auto b = evaluate_candidates(inst, cands, cfg.inner_opt, Execution::parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t c = 0; c < a.size(); ++c) {
        CHECK(a[c].sum_rate == b[c].sum_rate);
        CHECK(a[c].iterations == b[c].iterations);
    }
    const auto ms = local_search(random_instance(2, 3, 2, 0.8, 3), SicMatrix(6), cfg, Execution::serial);
    const auto mp = local_search(random_instance(2, 3, 2, 0.8, 3), SicMatrix(6), cfg, Execution::parallel);
    CHECK(ms.sic == mp.sic);
    CHECK(ms.sum_rate == mp.sum_rate);
}

TEST_CASE("search config errors")
{
    SearchConfig c;
    c.tau = 1.5;
    CHECK_THROWS_AS(c.check(), std::invalid_argument);
    c = SearchConfig{};
    c.exhaustive_limit = 0;
    CHECK_THROWS_AS(c.check(), std::invalid_argument);
    c = SearchConfig{};
    c.flip_budget = -1;
    CHECK_THROWS_AS(c.check(), std::invalid_argument);
}
