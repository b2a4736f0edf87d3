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

#include "noma/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace noma {

// Cluster-free SIC operations: (i, k) set means user k decodes user i's
// signal before decoding its own.
class SicMatrix
{
public:
    SicMatrix() = default;
    explicit SicMatrix(int users) : k_(users), d_(static_cast<std::size_t>(users * users), 0) {}

    int size() const { return k_; }
    bool operator()(int i, int k) const { return d_[idx(i, k)] != 0; }
    void set(int i, int k, bool on = true) { d_[idx(i, k)] = on ? 1 : 0; }

    int count() const;
    // Receivers that must decode signal i (excluding i itself).
    std::vector<int> decoders_of(int i) const;
    // Signals that receiver k cancels before its own.
    std::vector<int> cancelled_at(int k) const;

    // Row-major bytes; used for lexicographic tie-breaks and hashing.
    const std::vector<std::uint8_t> &raw() const { return d_; }

    friend bool operator==(const SicMatrix &, const SicMatrix &) = default;
    friend auto operator<=>(const SicMatrix &a, const SicMatrix &b) { return a.d_ <=> b.d_; }

private:
    std::size_t idx(int i, int k) const { return static_cast<std::size_t>(i * k_ + k); }

    int k_ = 0;
    std::vector<std::uint8_t> d_;
};

struct SicViolation
{
    enum class Kind { self_decoding, mutual_decoding, cross_cell };
    Kind kind;
    int i;
    int k;

    std::string message() const;
};

// Empty result means the matrix is valid. Throws on dimension mismatch.
std::vector<SicViolation> validate(const SicMatrix &sic, const NetworkInstance &inst);
void require_valid(const SicMatrix &sic, const NetworkInstance &inst);

using GainMatrix = Eigen::MatrixXd;           // gains(k, i) = |h_{cell(i),k}^H w_i|^2
using DecodingOrders = std::vector<std::vector<int>>;

GainMatrix effective_gains(const NetworkInstance &inst, const BeamformingSolution &beams);

// Cancelled signals by descending effective gain (index tie-break), then k.
std::vector<int> decoding_order(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &beams,
                                int k);
DecodingOrders decoding_orders(const SicMatrix &sic, const GainMatrix &gains);

struct RateReport
{
    int users = 0;
    std::vector<double> decode_rate; // users*users, NaN where undefined; see decode()
    std::vector<double> achievable_rate;
    double sum_rate = 0.0;
    DecodingOrders order;

    // Rate at which receiver k decodes signal i (bit/s/Hz).
    double decode(int i, int k) const { return decode_rate[static_cast<std::size_t>(i * users + k)]; }
    bool has_decode(int i, int k) const;
};

// `external` optionally adds a fixed interference power per user on top of
// the noise (used by distributed coordination); empty means none.
RateReport rate_report(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &beams,
                       std::span<const double> external = {});

// Same model with the decoding orders supplied by the caller.
RateReport rate_report_with_orders(const NetworkInstance &inst, const SicMatrix &sic, const GainMatrix &gains,
                                   const DecodingOrders &orders, std::span<const double> external = {});

double sum_rate(const RateReport &report);

// ---- scheme constructors ----

SicMatrix scheme_sdma(int users);

// Per cell: every stronger user (by data-channel norm) decodes every weaker one.
SicMatrix scheme_bb_noma(const NetworkInstance &inst);

struct CbNomaResult
{
    std::vector<std::vector<int>> clusters; // global user ids, head first
    SicMatrix sic;
    BeamformingSolution beams;
};

// n_clusters <= 0 selects the antenna count (clamped to K_c).
CbNomaResult scheme_cb_noma(const NetworkInstance &inst, int n_clusters = 0);

// Users sorted by descending data-channel norm, ties to the lower index.
std::vector<int> strength_order(const NetworkInstance &inst, std::span<const int> users);

enum class SearchStrategy { greedy_local, greedy, exhaustive };

struct SchemeSdma
{
    friend bool operator==(const SchemeSdma &, const SchemeSdma &) = default;
};
struct SchemeBbNoma
{
    friend bool operator==(const SchemeBbNoma &, const SchemeBbNoma &) = default;
};
struct SchemeCbNoma
{
    int clusters = 0; // 0 = antenna count
    friend bool operator==(const SchemeCbNoma &, const SchemeCbNoma &) = default;
};
struct SchemeClusterFree
{
    SearchStrategy strategy = SearchStrategy::greedy_local;
    friend bool operator==(const SchemeClusterFree &, const SchemeClusterFree &) = default;
};
using Scheme = std::variant<SchemeSdma, SchemeBbNoma, SchemeCbNoma, SchemeClusterFree>;

std::string scheme_name(const Scheme &s);
// Accepts sdma, bb_noma, cb_noma[:N], cluster_free[:greedy|:local|:exhaustive].
Scheme parse_scheme(std::string_view text);

} // namespace noma
