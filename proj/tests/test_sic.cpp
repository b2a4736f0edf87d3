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
#include "noma/beamforming.hpp"
#include "noma/sic.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace noma;
using namespace noma::testing;

TEST_CASE("validate")
{
    const auto inst = random_instance(2, 4, 4, 0.5, 1);

    SUBCASE("all-zero matrix is valid")
    {
        CHECK(validate(SicMatrix(8), inst).empty());
    }
    SUBCASE("mutual decoding")
    {
        SicMatrix d(8);
        d.set(1, 2);
        d.set(2, 1);
        const auto v = validate(d, inst);
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == SicViolation::Kind::mutual_decoding);
        CHECK(v[0].message() == "mutual decoding at (1,2)");
    }
    SUBCASE("cross-cell SIC")
    {
        SicMatrix d(8);
        d.set(0, 7);
        const auto v = validate(d, inst);
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == SicViolation::Kind::cross_cell);
        CHECK(v[0].message().find("cross-cell SIC") == 0);
    }
    SUBCASE("self decoding and multiple violations are all reported")
    {
        SicMatrix d(8);
        d.set(3, 3);
        d.set(0, 5);
        d.set(5, 0);
        const auto v = validate(d, inst);
        CHECK(v.size() == 4); // self, mutual, two cross-cell
        CHECK_THROWS_AS(require_valid(d, inst), std::invalid_argument);
    }
    SUBCASE("dimension mismatch throws")
    {
        CHECK_THROWS_AS(validate(SicMatrix(7), inst), std::invalid_argument);
    }
}

TEST_CASE("decoding order")
{
    // Receiver 2 sees user 0 with gain 1 and user 1 with gain 4.
    const auto inst = single_cell({real_vec({1, 0}), real_vec({1, 0}), real_vec({1, 0})});
    BeamformingSolution w{{real_vec({1, 0}), real_vec({2, 0}), real_vec({1, 0})}};

    SUBCASE("nothing cancelled")
    {
        CHECK(decoding_order(inst, SicMatrix(3), w, 2) == std::vector<int>{2});
    }
    SUBCASE("stronger first, own last")
    {
        SicMatrix d(3);
        d.set(0, 2);
        d.set(1, 2);
        CHECK(decoding_order(inst, d, w, 2) == std::vector<int>{1, 0, 2});
    }
    SUBCASE("exact ties go to the lower index")
    {
        BeamformingSolution tie{{real_vec({1, 0}), real_vec({1, 0}), real_vec({1, 0})}};
        SicMatrix d(3);
        d.set(1, 2);
        d.set(0, 2);
        CHECK(decoding_order(inst, d, tie, 2) == std::vector<int>{0, 1, 2});
    }
}

TEST_CASE("rate report: SDMA two-user closed form")
{
    const auto inst = random_instance(1, 2, 4, 0.4, 17);
    const auto w = random_beams(inst, 3);
    const auto rep = rate_report(inst, SicMatrix(2), w);
    for (int k = 0; k < 2; ++k) {
        const int j = 1 - k;
        const double gk = oracle::inner_abs2(inst.data(k), w.w[static_cast<std::size_t>(k)]);
        const double gj = oracle::inner_abs2(inst.data(k), w.w[static_cast<std::size_t>(j)]);
        CHECK(rep.achievable_rate[static_cast<std::size_t>(k)] ==
              doctest::Approx(std::log2(1.0 + gk / (inst.noise_power + gj))).epsilon(1e-13));
    }
}

TEST_CASE("rate report: hand-arithmetic SIC example")
{
    const auto inst = single_cell({real_vec({1, 0}), real_vec({2, 0})}, 1.0, 10.0);
    BeamformingSolution w{{real_vec({1, 0}), real_vec({1, 0})}};
    SicMatrix d(2);
    d.set(0, 1); // user 1 (second) decodes user 0's signal first
    const auto rep = rate_report(inst, d, w);
    CHECK(rep.decode(0, 1) == doctest::Approx(std::log2(1.8)).epsilon(1e-15));
    CHECK(rep.decode(0, 0) == doctest::Approx(std::log2(1.5)).epsilon(1e-15));
    CHECK(rep.achievable_rate[0] == doctest::Approx(std::log2(1.5)).epsilon(1e-15));
    CHECK(rep.decode(1, 1) == doctest::Approx(std::log2(5.0)).epsilon(1e-15));
    CHECK(rep.achievable_rate[1] == doctest::Approx(std::log2(5.0)).epsilon(1e-15));
    CHECK_FALSE(rep.has_decode(1, 0));
    CHECK(rep.sum_rate == doctest::Approx(std::log2(1.5) + std::log2(5.0)).epsilon(1e-15));
}

TEST_CASE("rate report: orthogonal channels + ZF + full SIC is SIC overuse")
{
    const auto inst = single_cell({real_vec({4, 0, 0, 0}), real_vec({0, 3, 0, 0}), real_vec({0, 0, 2, 0}),
                                   real_vec({0, 0, 0, 1})});
    const auto w = zf_init(inst);
    const auto d = scheme_bb_noma(inst);
    const auto rep = rate_report(inst, d, w);
    int zeros = 0;
    for (int i = 0; i < 4; ++i) {
        if (!d.decoders_of(i).empty()) {
            CHECK(rep.achievable_rate[static_cast<std::size_t>(i)] == 0.0);
            ++zeros;
        } else {
            CHECK(rep.achievable_rate[static_cast<std::size_t>(i)] > 0.0);
        }
    }
    CHECK(zeros == 3);
}

TEST_CASE("rate report errors")
{
    const auto inst = random_instance(2, 2, 2, 0.5, 4);
    auto w = random_beams(inst, 9);
    SicMatrix cross(4);
    cross.set(0, 2);
    CHECK_THROWS_AS(rate_report(inst, cross, w), std::invalid_argument);
    w.w[0] *= 100.0;
    CHECK_THROWS_AS(rate_report(inst, SicMatrix(4), w), std::invalid_argument);
}

TEST_CASE("generalization: SDMA matrix matches an independent SINR path")
{
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto inst = random_instance(1 + static_cast<int>(s % 3), 3, 4, 0.1 * static_cast<double>(s % 10), s);
        const auto w = random_beams(inst, s + 1000);
        const auto rep = rate_report(inst, scheme_sdma(inst.num_users()), w);
        const auto ref = oracle::sdma_rates(inst, w);
        for (std::size_t k = 0; k < ref.size(); ++k)
            CHECK(std::abs(rep.achievable_rate[k] - ref[k]) <= 1e-12);
    }
}

TEST_CASE("generalization: BB-NOMA matches the all-orders oracle for K <= 3")
{
    for (int K = 1; K <= 3; ++K)
        for (std::uint64_t s = 0; s < 30; ++s) {
            const auto inst = random_instance(1, K, 4, 0.7, 500 + s);
            const auto w = random_beams(inst, s);
            const auto d = scheme_bb_noma(inst);
            const auto rep = rate_report(inst, d, w);
            const auto ref = oracle::all_orders(inst, d, w);
            CHECK(ref.unique_order);
            for (int i = 0; i < K; ++i) {
                CHECK(std::abs(rep.achievable_rate[static_cast<std::size_t>(i)] - ref.achievable[static_cast<std::size_t>(i)]) <= 1e-12);
                // min-over-decoders structure
                double lo = rep.decode(i, i);
                for (int k : d.decoders_of(i))
                    lo = std::min(lo, rep.decode(i, k));
                CHECK(rep.achievable_rate[static_cast<std::size_t>(i)] == lo);
            }
        }
}

TEST_CASE("property: achievable rate never exceeds own decode rate; sum is consistent")
{
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto inst = random_instance(2, 4, 3, 0.6, s);
        const auto w = random_beams(inst, s);
        const auto d = random_sic(inst, s);
        const auto rep = rate_report(inst, d, w);
        for (int i = 0; i < inst.num_users(); ++i)
            CHECK(rep.achievable_rate[static_cast<std::size_t>(i)] <= rep.decode(i, i));
        CHECK(sum_rate(rep) == rep.sum_rate);
        CHECK(sum_rate(rep) == doctest::Approx(std::accumulate(rep.achievable_rate.begin(), rep.achievable_rate.end(), 0.0)));
    }
}

TEST_CASE("property: adding a SIC edge only helps later signals at that receiver")
{
    int checked = 0;
    for (std::uint64_t s = 0; s < 60; ++s) {
        const auto inst = random_instance(1, 5, 4, 0.8, 900 + s);
        const auto w = random_beams(inst, s);
        SicMatrix d = random_sic(inst, s);
        // Find a free pair and add i -> k.
        for (int i = 0; i < 5; ++i)
            for (int k = 0; k < 5; ++k) {
                if (i == k || d(i, k) || d(k, i))
                    continue;
                const auto before = rate_report(inst, d, w);
                SicMatrix more = d;
                more.set(i, k);
                const auto after = rate_report(inst, more, w);
                const auto &ord = after.order[static_cast<std::size_t>(k)];
                const auto pos = std::find(ord.begin(), ord.end(), i) - ord.begin();
                for (long m = 0; m < static_cast<long>(ord.size()); ++m) {
                    const int j = ord[static_cast<std::size_t>(m)];
                    if (m < pos)
                        CHECK(after.decode(j, k) == doctest::Approx(before.decode(j, k)).epsilon(1e-12));
                    else if (m > pos)
                        CHECK(after.decode(j, k) >= before.decode(j, k) * (1.0 - 1e-12));
                }
                ++checked;
                goto next_seed;
            }
    next_seed:;
    }
    CHECK(checked > 40);
}

TEST_CASE("property: joint scaling of beams and noise leaves rates unchanged")
{
    for (std::uint64_t s = 0; s < 30; ++s) {
        auto inst = random_instance(2, 3, 4, 0.5, s);
        const auto w = random_beams(inst, s);
        const auto d = random_sic(inst, s);
        const auto base = rate_report(inst, d, w);
        const double c = 0.25 + 0.5 * static_cast<double>(s);
        auto scaled_inst = inst;
        scaled_inst.noise_power *= c * c;
        scaled_inst.power_budget *= c * c;
        auto scaled_w = w;
        for (auto &v : scaled_w.w)
            v *= c;
        const auto rep = rate_report(scaled_inst, d, scaled_w);
        for (int i = 0; i < inst.num_users(); ++i)
            CHECK(std::abs(rep.achievable_rate[static_cast<std::size_t>(i)] - base.achievable_rate[static_cast<std::size_t>(i)]) <= 1e-12);
    }
}

TEST_CASE("sum_rate")
{
    RateReport empty;
    CHECK(sum_rate(empty) == 0.0);
    RateReport two;
    two.achievable_rate = {1.0, 2.5};
    CHECK(sum_rate(two) == 3.5);
}

TEST_CASE("scheme_sdma")
{
    CHECK(scheme_sdma(1).size() == 1);
    CHECK(scheme_sdma(1).count() == 0);
    const auto inst = random_instance(1, 6, 4, 0.5, 1);
    const auto d = scheme_sdma(6);
    CHECK(d.count() == 0);
    CHECK(validate(d, inst).empty());
}

TEST_CASE("scheme_bb_noma")
{
    SUBCASE("two users: only the weaker is decoded")
    {
        const auto inst = single_cell({real_vec({3, 0}), real_vec({1, 1})});
        const auto d = scheme_bb_noma(inst);
        CHECK(d.count() == 1);
        CHECK(d(1, 0)); // user 0 (stronger) decodes user 1
    }
    SUBCASE("three users: C(3,2) edges")
    {
        const auto inst = random_instance(1, 3, 4, 0.5, 5);
        const auto d = scheme_bb_noma(inst);
        CHECK(d.count() == 3);
        CHECK(validate(d, inst).empty());
    }
    SUBCASE("equal norms tie-break on index and stay acyclic")
    {
        const auto inst = single_cell({real_vec({1, 0}), real_vec({0, 1}), real_vec({1, 0})});
        const auto d = scheme_bb_noma(inst);
        CHECK(d(1, 0));
        CHECK(d(2, 0));
        CHECK(d(2, 1));
        CHECK(d.count() == 3);
        CHECK(validate(d, inst).empty());
    }
    SUBCASE("per cell in multi-cell networks")
    {
        const auto inst = random_instance(3, 6, 4, 0.5, 8);
        const auto d = scheme_bb_noma(inst);
        CHECK(d.count() == 3 * 15);
        CHECK(validate(d, inst).empty());
    }
}

TEST_CASE("scheme_cb_noma")
{
    SUBCASE("singleton clusters reduce to SDMA with ZF beams")
    {
        const auto inst = random_instance(1, 4, 4, 0.3, 12);
        const auto cb = scheme_cb_noma(inst, 4);
        CHECK(cb.sic.count() == 0);
        CHECK(cb.clusters.size() == 4);
        const auto zf = zf_init(inst);
        const auto a = rate_report(inst, cb.sic, cb.beams);
        const auto b = rate_report(inst, scheme_sdma(4), zf);
        CHECK(a.sum_rate == doctest::Approx(b.sum_rate).epsilon(1e-9));
    }
    SUBCASE("two identical channels in one cluster")
    {
        const auto inst = single_cell({real_vec({1, 2}), real_vec({1, 2})});
        const auto cb = scheme_cb_noma(inst, 1);
        REQUIRE(cb.clusters.size() == 1);
        CHECK(cb.clusters[0].size() == 2);
        CHECK(cb.sic.count() == 1);
        CHECK(cb.sic(1, 0)); // equal norms: index 0 ranks stronger
    }
    SUBCASE("greedy clustering agrees with an exhaustive assignment oracle")
    {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto inst = random_instance(1, 6, 4, 0.9, 300 + s);
            const auto cb = scheme_cb_noma(inst, 4);
            REQUIRE(cb.clusters.size() == 4);
            std::size_t total = 0;
            std::vector<int> heads;
            for (const auto &c : cb.clusters) {
                total += c.size();
                heads.push_back(c.front());
            }
            CHECK(total == 6);
            CHECK(validate(cb.sic, inst).empty());

            // Exhaustive over all head assignments of the non-heads.
            std::vector<int> others;
            for (int u = 0; u < 6; ++u)
                if (std::find(heads.begin(), heads.end(), u) == heads.end())
                    others.push_back(u);
            double best = -1.0;
            std::vector<int> best_assign;
            std::vector<int> assign(others.size(), 0);
            for (int code = 0; code < 16; ++code) {
                assign[0] = code % 4;
                assign[1] = code / 4;
                double score = 0.0;
                for (std::size_t o = 0; o < others.size(); ++o)
                    score += oracle::correlation(inst.data(others[o]), inst.data(heads[static_cast<std::size_t>(assign[o])]));
                if (score > best + 1e-15) {
                    best = score;
                    best_assign = assign;
                }
            }
            for (std::size_t o = 0; o < others.size(); ++o) {
                const auto &cluster = cb.clusters[static_cast<std::size_t>(best_assign[o])];
                CHECK(std::find(cluster.begin(), cluster.end(), others[o]) != cluster.end());
                // chosen head correlation dominates every other head considered
                const double mine = oracle::correlation(inst.data(others[o]), inst.data(cluster.front()));
                for (int h : heads)
                    CHECK(mine >= oracle::correlation(inst.data(others[o]), inst.data(h)) - 1e-15);
            }
            // Heads: each new head minimised its highest correlation to earlier heads.
            for (std::size_t q = 1; q < heads.size(); ++q) {
                auto score = [&](int u) {
                    double m = 0.0;
                    for (std::size_t p = 0; p < q; ++p)
                        m = std::max(m, oracle::correlation(inst.data(u), inst.data(heads[p])));
                    return m;
                };
                for (int u = 0; u < 6; ++u)
                    if (std::find(heads.begin(), heads.begin() + static_cast<long>(q), u) == heads.begin() + static_cast<long>(q))
                        CHECK(score(heads[q]) <= score(u) + 1e-15);
            }
        }
    }
    SUBCASE("power split favours weaker users and fills the budget")
    {
        const auto inst = random_instance(1, 6, 4, 0.9, 44);
        const auto cb = scheme_cb_noma(inst);
        CHECK(cb.beams.cell_power(inst)[0] == doctest::Approx(inst.power_budget).epsilon(1e-12));
        for (const auto &c : cb.clusters)
            for (int a : c)
                for (int b : c)
                    if (inst.data(a).norm() < inst.data(b).norm())
                        CHECK(cb.beams.w[static_cast<std::size_t>(a)].norm() >= cb.beams.w[static_cast<std::size_t>(b)].norm());
    }
    SUBCASE("cluster count errors")
    {
        const auto inst = random_instance(1, 3, 4, 0.5, 1);
        CHECK_THROWS_AS(scheme_cb_noma(inst, 4), std::invalid_argument);
        CHECK_NOTHROW(scheme_cb_noma(inst, 0)); // default: min(N_t, K_c)
    }
}

TEST_CASE("scheme names round-trip")
{
    for (const char *name : {"sdma", "bb_noma", "cb_noma", "cb_noma:3", "cluster_free", "cluster_free:greedy",
                             "cluster_free:exhaustive"})
        CHECK(scheme_name(parse_scheme(name)) == name);
    CHECK(scheme_name(parse_scheme("cluster_free:local")) == "cluster_free");
    CHECK_THROWS_AS(parse_scheme("oma"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scheme("cb_noma:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scheme("sdma:1"), std::invalid_argument);
}
