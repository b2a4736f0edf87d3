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
#include "noma/channel.hpp"
#include "noma/sic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace noma {

SicMatrix scheme_sdma(int users)
{
    if (users < 0)
        throw std::invalid_argument("scheme_sdma: negative user count");
    return SicMatrix(users);
}

std::vector<int> strength_order(const NetworkInstance &inst, std::span<const int> users)
{
    std::vector<int> order(users.begin(), users.end());
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double na = inst.data(a).squaredNorm();
        const double nb = inst.data(b).squaredNorm();
        if (na != nb)
            return na > nb;
        return a < b;
    });
    return order;
}

namespace {

// Sequential SIC inside a group: each user decodes every weaker member.
void chain_sic(const NetworkInstance &inst, std::span<const int> group, SicMatrix &sic)
{
    const auto order = strength_order(inst, group);
    for (std::size_t s = 0; s < order.size(); ++s)
        for (std::size_t w = s + 1; w < order.size(); ++w)
            sic.set(order[w], order[s]);
}

} // namespace

SicMatrix scheme_bb_noma(const NetworkInstance &inst)
{
    SicMatrix sic(inst.num_users());
    for (int c = 0; c < inst.num_cells; ++c) {
        const auto users = inst.users_in(c);
        chain_sic(inst, users, sic);
    }
    return sic;
}

CbNomaResult scheme_cb_noma(const NetworkInstance &inst, int n_clusters)
{
    const int Kc = inst.users_per_cell;
    const int n = n_clusters <= 0 ? std::min(inst.antennas, Kc) : n_clusters;
    if (n < 1 || n > Kc)
        throw std::invalid_argument("scheme_cb_noma: cluster count must lie in [1, users per cell]");

    CbNomaResult out;
    out.sic = SicMatrix(inst.num_users());
    out.beams.w.assign(static_cast<std::size_t>(inst.num_users()), CVec::Zero(inst.antennas));

    for (int c = 0; c < inst.num_cells; ++c) {
        const auto users = inst.users_in(c);
        auto corr = [&](int a, int b) { return pairwise_correlation(inst.data(a), inst.data(b)); };

        // Heads: start from the strongest user, then repeatedly add the user
        // whose highest correlation to the chosen heads is smallest.
        std::vector<int> heads{strength_order(inst, users).front()};
        while (static_cast<int>(heads.size()) < n) {
            int pick = -1;
            double pick_score = 2.0;
            for (int u : users) {
                if (std::find(heads.begin(), heads.end(), u) != heads.end())
                    continue;
                double score = 0.0;
                for (int h : heads)
                    score = std::max(score, corr(u, h));
                if (score < pick_score) {
                    pick_score = score;
                    pick = u;
                }
            }
            heads.push_back(pick);
        }

        std::vector<std::vector<int>> clusters;
        for (int h : heads)
            clusters.push_back({h});
        for (int u : users) {
            if (std::find(heads.begin(), heads.end(), u) != heads.end())
                continue;
            std::size_t best = 0;
            double best_corr = -1.0;
            for (std::size_t q = 0; q < heads.size(); ++q) {
                const double r = corr(u, heads[q]);
                if (r > best_corr) {
                    best_corr = r;
                    best = q;
                }
            }
            clusters[best].push_back(u);
        }

        // One ZF direction per cluster, computed over the head channels.
        CMat rows(n, inst.antennas);
        for (int q = 0; q < n; ++q)
            rows.row(q) = inst.data(heads[static_cast<std::size_t>(q)]).adjoint();
        const CMat dirs = zf_directions(rows, inst.noise_power * n / inst.power_budget);

        const double cluster_power = inst.power_budget / n;
        for (int q = 0; q < n; ++q) {
            const auto &members = clusters[static_cast<std::size_t>(q)];
            chain_sic(inst, members, out.sic);
            CVec v = dirs.col(q);
            if (!(v.norm() > 0.0) || !v.allFinite())
                v = inst.data(heads[static_cast<std::size_t>(q)]);
            v.normalize();
            // Weaker users (smaller channel norm) receive the larger share.
            double total = 0.0;
            for (int u : members)
                total += 1.0 / inst.data(u).squaredNorm();
            for (int u : members) {
                const double share = (1.0 / inst.data(u).squaredNorm()) / total;
                out.beams.w[static_cast<std::size_t>(u)] = std::sqrt(cluster_power * share) * v;
            }
        }
        for (auto &cl : clusters)
            out.clusters.push_back(std::move(cl));
    }
    return out;
}

std::string scheme_name(const Scheme &s)
{
    struct Visitor
    {
        std::string operator()(const SchemeSdma &) const { return "sdma"; }
        std::string operator()(const SchemeBbNoma &) const { return "bb_noma"; }
        std::string operator()(const SchemeCbNoma &c) const
        {
            return c.clusters > 0 ? "cb_noma:" + std::to_string(c.clusters) : "cb_noma";
        }
        std::string operator()(const SchemeClusterFree &c) const
        {
            switch (c.strategy) {
            case SearchStrategy::greedy_local: return "cluster_free";
            case SearchStrategy::greedy: return "cluster_free:greedy";
            case SearchStrategy::exhaustive: return "cluster_free:exhaustive";
            }
            return "cluster_free";
        }
    };
    return std::visit(Visitor{}, s);
}

Scheme parse_scheme(std::string_view text)
{
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    auto no_arg = [&] {
        if (colon != std::string_view::npos)
            throw std::invalid_argument("scheme '" + std::string(text) + "' takes no argument");
    };
    if (head == "sdma") {
        no_arg();
        return SchemeSdma{};
    }
    if (head == "bb_noma") {
        no_arg();
        return SchemeBbNoma{};
    }
    if (head == "cb_noma") {
        SchemeCbNoma s;
        if (colon != std::string_view::npos) {
            auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), s.clusters);
            if (ec != std::errc{} || p != arg.data() + arg.size() || s.clusters < 1)
                throw std::invalid_argument("bad cluster count in scheme '" + std::string(text) + "'");
        }
        return s;
    }
    if (head == "cluster_free") {
        SchemeClusterFree s;
        if (colon == std::string_view::npos || arg == "local")
            s.strategy = SearchStrategy::greedy_local;
        else if (arg == "greedy")
            s.strategy = SearchStrategy::greedy;
        else if (arg == "exhaustive")
            s.strategy = SearchStrategy::exhaustive;
        else
            throw std::invalid_argument("unknown cluster_free strategy '" + std::string(arg) + "'");
        return s;
    }
    throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

} // namespace noma
