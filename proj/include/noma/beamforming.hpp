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

#include "noma/sic.hpp"
#include "noma/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace noma {

enum class GradMode { analytic, finite_difference };

struct OptimizerConfig
{
    double beta = 50.0;         // smoothed-min sharpness
    int max_iters = 500;
    int order_refresh_period = 25;
    double step_init = 0.1;
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;
    double tol = 1e-6;          // relative objective change
    GradMode grad_mode = GradMode::analytic;

    void check() const;
};

struct OptimStep
{
    int iteration = 0;
    double objective_before = 0.0; // smoothed objective before the step, same frozen orders
    double objective = 0.0;        // after the accepted step
    double sum_rate = 0.0;         // true sum rate after the step
    double step = 0.0;
    bool orders_refreshed = false;
    std::vector<double> cell_power;
};

struct OptimTrace
{
    std::vector<OptimStep> steps;
    double initial_objective = 0.0;
    double initial_sum_rate = 0.0;
};

struct BeamOptResult
{
    BeamformingSolution beams; // best-seen iterate by true sum rate
    OptimTrace trace;
    double sum_rate = 0.0;
    int iterations = 0; // accepted steps
};

// W = H^H (H H^H + lambda I)^{-1} for stacked rows H (n x N_t); columns are the
// unnormalised beam directions.
CMat zf_directions(const CMat &rows, double lambda);

// Regularised zero-forcing beams for one cell (other cells' entries left
// untouched), lambda = sigma^2 K_c / P, equal power P / K_c per user.
void zf_init(const NetworkInstance &inst, int cell, BeamformingSolution &beams);
BeamformingSolution zf_init(const NetworkInstance &inst);

// -(1/beta) ln sum exp(-beta x), clamped so that
// 0 <= min(x) - result <= ln(m) / beta holds exactly in floating point.
double smoothed_min(std::span<const double> values, double beta);

// Real coordinates of all beams, user-major, (re, im) per antenna.
std::vector<double> flatten(const BeamformingSolution &beams);
BeamformingSolution unflatten(std::span<const double> x, int users, int antennas);

// Sum over users of the smoothed min of their decode rates, with the decoding
// orders held fixed.
class SmoothedObjective
{
public:
    SmoothedObjective(const NetworkInstance &inst, const SicMatrix &sic, double beta,
                      std::span<const double> external = {});

    void refresh_orders(const BeamformingSolution &beams);
    void set_orders(DecodingOrders orders);
    const DecodingOrders &orders() const { return orders_; }

    double value(const BeamformingSolution &beams) const;
    // Returns the value; grad[u] holds d/dRe(w_u) + i d/dIm(w_u).
    double value_and_gradient(const BeamformingSolution &beams, std::vector<CVec> &grad) const;

    // Unsmoothed sum rate with decoding orders re-derived from `beams`.
    double true_sum_rate(const BeamformingSolution &beams) const;

private:
    void compute_gains(const BeamformingSolution &beams) const;
    double evaluate(const BeamformingSolution &beams, std::vector<CVec> *grad) const;

    const NetworkInstance &inst_;
    const SicMatrix &sic_;
    double beta_;
    std::vector<double> external_;
    std::vector<std::vector<int>> decoders_;    // {i} followed by decoders_of(i)
    std::vector<std::vector<int>> cancelled_;   // per receiver
    std::vector<std::vector<int>> uncancelled_; // per receiver: not in cancelled_ and not k
    DecodingOrders orders_;

    // Scratch, reused across calls.
    mutable Eigen::MatrixXcd proj_; // proj_(k, i) = h_{cell(i),k}^H w_i
    mutable Eigen::MatrixXd gain_;
    mutable Eigen::MatrixXd rate_;
    mutable Eigen::MatrixXd weight_;
    mutable std::vector<double> level_;
    mutable std::vector<double> dlevel_;
    mutable std::vector<double> vals_;
    mutable std::vector<int> order_scratch_;
};

// Orders are computed from `beams` and then frozen.
double smoothed_sum_rate(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &beams,
                         double beta);
double smoothed_sum_rate(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &beams,
                         double beta, const DecodingOrders &orders);

std::vector<double> analytic_gradient(const NetworkInstance &inst, const SicMatrix &sic,
                                      const BeamformingSolution &beams, double beta);
// Central differences of an arbitrary scalar function of real coordinates.
std::vector<double> central_difference_gradient(const std::function<double(std::span<const double>)> &f,
                                               std::span<const double> x, double h);

// Central differences of the smoothed objective over every real coordinate,
// orders frozen at `beams`.
std::vector<double> finite_difference_gradient(const NetworkInstance &inst, const SicMatrix &sic,
                                               const BeamformingSolution &beams, double beta, double h);

// Projected gradient ascent with Armijo backtracking. Throws
// std::runtime_error on a non-finite objective.
BeamOptResult optimize_beams(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &start,
                             const OptimizerConfig &cfg, std::span<const double> external = {});

} // namespace noma
