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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace noma {

void OptimizerConfig::check() const
{
    if (!(beta > 0.0))
        throw std::invalid_argument("beta must be positive");
    if (max_iters < 0)
        throw std::invalid_argument("max_iters must be non-negative");
    if (order_refresh_period < 1)
        throw std::invalid_argument("order_refresh_period must be >= 1");
    if (!(step_init > 0.0))
        throw std::invalid_argument("step_init must be positive");
    if (!(armijo_c > 0.0 && armijo_c < 1.0))
        throw std::invalid_argument("armijo_c must lie in (0,1)");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        throw std::invalid_argument("backtrack_factor must lie in (0,1)");
    if (!(tol >= 0.0))
        throw std::invalid_argument("tol must be non-negative");
}

CMat zf_directions(const CMat &rows, double lambda)
{
    const Eigen::Index n = rows.rows();
    CMat gram = rows * rows.adjoint();
    gram.diagonal().array() += lambda;
    return rows.adjoint() * gram.ldlt().solve(CMat::Identity(n, n));
}

void zf_init(const NetworkInstance &inst, int cell, BeamformingSolution &beams)
{
    const int Kc = inst.users_per_cell;
    const auto users = inst.users_in(cell);
    beams.w.resize(static_cast<std::size_t>(inst.num_users()), CVec::Zero(inst.antennas));

    CMat rows(Kc, inst.antennas);
    for (int j = 0; j < Kc; ++j)
        rows.row(j) = inst.data(users[static_cast<std::size_t>(j)]).adjoint();

    const CMat dirs = zf_directions(rows, inst.noise_power * Kc / inst.power_budget);

    const double amp = std::sqrt(inst.power_budget / Kc);
    for (int j = 0; j < Kc; ++j) {
        CVec v = dirs.col(j);
        double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n)) {
            v = inst.data(users[static_cast<std::size_t>(j)]);
            n = v.norm();
        }
        beams.w[static_cast<std::size_t>(users[static_cast<std::size_t>(j)])] = (amp / n) * v;
    }
}

BeamformingSolution zf_init(const NetworkInstance &inst)
{
    BeamformingSolution beams;
    for (int c = 0; c < inst.num_cells; ++c)
        zf_init(inst, c, beams);
    return beams;
}

double smoothed_min(std::span<const double> values, double beta)
{
    if (values.empty())
        throw std::invalid_argument("smoothed_min of an empty set");
    const double lo = *std::min_element(values.begin(), values.end());
    if (values.size() == 1)
        return lo;
    double s = 0.0;
    for (double x : values)
        s += std::exp(-beta * (x - lo));
    const double bound = std::log(static_cast<double>(values.size())) / beta;
    double out = lo - std::clamp(std::log(s) / beta, 0.0, bound);
    // Rounding in the subtraction can push the gap a few ulps past either end.
    while (lo - out > bound)
        out = std::nextafter(out, std::numeric_limits<double>::infinity());
    if (lo - out < 0.0)
        out = lo;
    return out;
}

std::vector<double> flatten(const BeamformingSolution &beams)
{
    std::vector<double> x;
    for (const auto &w : beams.w)
        for (Eigen::Index a = 0; a < w.size(); ++a) {
            x.push_back(w[a].real());
            x.push_back(w[a].imag());
        }
    return x;
}

BeamformingSolution unflatten(std::span<const double> x, int users, int antennas)
{
    if (x.size() != static_cast<std::size_t>(2 * users * antennas))
        throw std::invalid_argument("unflatten: size mismatch");
    BeamformingSolution b;
    b.w.assign(static_cast<std::size_t>(users), CVec::Zero(antennas));
    std::size_t p = 0;
    for (auto &w : b.w)
        for (int a = 0; a < antennas; ++a, p += 2)
            w[a] = cplx(x[p], x[p + 1]);
    return b;
}

SmoothedObjective::SmoothedObjective(const NetworkInstance &inst, const SicMatrix &sic, double beta,
                                     std::span<const double> external)
    : inst_(inst), sic_(sic), beta_(beta), external_(external.begin(), external.end())
{
    const int K = inst.num_users();
    if (!external_.empty() && external_.size() != static_cast<std::size_t>(K))
        throw std::invalid_argument("external interference vector has wrong length");
    if (sic.size() != K)
        throw std::invalid_argument("SIC matrix size differs from user count");
    decoders_.resize(static_cast<std::size_t>(K));
    cancelled_.resize(static_cast<std::size_t>(K));
    uncancelled_.resize(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        auto &d = decoders_[static_cast<std::size_t>(i)];
        d.push_back(i);
        for (int k : sic.decoders_of(i))
            d.push_back(k);
        cancelled_[static_cast<std::size_t>(i)] = sic.cancelled_at(i);
        for (int j = 0; j < K; ++j)
            if (j != i && !sic(j, i))
                uncancelled_[static_cast<std::size_t>(i)].push_back(j);
    }
    proj_.resize(K, K);
    gain_.resize(K, K);
    rate_.resize(K, K);
    weight_.resize(K, K);
}

void SmoothedObjective::set_orders(DecodingOrders orders)
{
    if (orders.size() != static_cast<std::size_t>(inst_.num_users()))
        throw std::invalid_argument("decoding orders have wrong user count");
    for (std::size_t k = 0; k < orders.size(); ++k)
        if (orders[k].size() != cancelled_[k].size() + 1 || orders[k].back() != static_cast<int>(k))
            throw std::invalid_argument("decoding order of user " + std::to_string(k) + " does not match the SIC matrix");
    orders_ = std::move(orders);
}

void SmoothedObjective::refresh_orders(const BeamformingSolution &beams)
{
    orders_ = decoding_orders(sic_, effective_gains(inst_, beams));
}

double SmoothedObjective::value(const BeamformingSolution &beams) const
{
    return evaluate(beams, nullptr);
}

double SmoothedObjective::value_and_gradient(const BeamformingSolution &beams, std::vector<CVec> &grad) const
{
    return evaluate(beams, &grad);
}

void SmoothedObjective::compute_gains(const BeamformingSolution &beams) const
{
    const int K = inst_.num_users();
    if (beams.w.size() != static_cast<std::size_t>(K))
        throw std::invalid_argument("beamforming solution has wrong user count");
    for (int i = 0; i < K; ++i) {
        const int b = inst_.cell_of[static_cast<std::size_t>(i)];
        const CVec &w = beams.w[static_cast<std::size_t>(i)];
        for (int k = 0; k < K; ++k)
            proj_(k, i) = inst_.link(b, k).dot(w);
    }
    gain_ = proj_.cwiseAbs2();
}

double SmoothedObjective::true_sum_rate(const BeamformingSolution &beams) const
{
    compute_gains(beams);
    const int K = inst_.num_users();
    for (int k = 0; k < K; ++k) {
        auto &ord = order_scratch_;
        ord = cancelled_[static_cast<std::size_t>(k)];
        std::sort(ord.begin(), ord.end(), [&](int a, int b) {
            if (gain_(k, a) != gain_(k, b))
                return gain_(k, a) > gain_(k, b);
            return a < b;
        });
        ord.push_back(k);
        double floor_power = inst_.noise_power + (external_.empty() ? 0.0 : external_[static_cast<std::size_t>(k)]);
        for (int j : uncancelled_[static_cast<std::size_t>(k)])
            floor_power += gain_(k, j);
        double later = 0.0;
        for (std::size_t m = ord.size(); m-- > 0;) {
            rate_(ord[m], k) = std::log2(1.0 + gain_(k, ord[m]) / (floor_power + later));
            later += gain_(k, ord[m]);
        }
    }
    double total = 0.0;
    for (int i = 0; i < K; ++i) {
        double r = rate_(i, i);
        for (int k : decoders_[static_cast<std::size_t>(i)])
            r = std::min(r, rate_(i, k));
        total += r;
    }
    return total;
}

double SmoothedObjective::evaluate(const BeamformingSolution &beams, std::vector<CVec> *grad) const
{
    const int K = inst_.num_users();
    if (orders_.size() != static_cast<std::size_t>(K))
        throw std::logic_error("SmoothedObjective: decoding orders not set");
    compute_gains(beams);

    // Per receiver: level[m] = floor + gains at positions >= m, level[M] = floor,
    // so the rate at position m is log2(level[m] / level[m+1]).
    std::size_t total_levels = 0;
    for (const auto &ord : orders_)
        total_levels += ord.size() + 1;
    level_.resize(total_levels);
    std::size_t off = 0;
    for (int k = 0; k < K; ++k) {
        const auto &ord = orders_[static_cast<std::size_t>(k)];
        double floor_power = inst_.noise_power + (external_.empty() ? 0.0 : external_[static_cast<std::size_t>(k)]);
        for (int j : uncancelled_[static_cast<std::size_t>(k)])
            floor_power += gain_(k, j);
        const std::size_t M = ord.size();
        double *A = level_.data() + off;
        A[M] = floor_power;
        for (std::size_t m = M; m-- > 0;)
            A[m] = A[m + 1] + gain_(k, ord[m]);
        for (std::size_t m = 0; m < M; ++m)
            rate_(ord[m], k) = std::log2(1.0 + gain_(k, ord[m]) / A[m + 1]);
        off += M + 1;
    }

    double total = 0.0;
    for (int i = 0; i < K; ++i) {
        const auto &dec = decoders_[static_cast<std::size_t>(i)];
        vals_.clear();
        for (int k : dec)
            vals_.push_back(rate_(i, k));
        total += smoothed_min(vals_, beta_);
        if (grad) {
            const double lo = *std::min_element(vals_.begin(), vals_.end());
            double s = 0.0;
            for (double v : vals_)
                s += std::exp(-beta_ * (v - lo));
            for (std::size_t t = 0; t < dec.size(); ++t)
                weight_(i, dec[t]) = std::exp(-beta_ * (vals_[t] - lo)) / s;
        }
    }
    if (!grad)
        return total;

    grad->resize(static_cast<std::size_t>(K));
    for (auto &g : *grad)
        g.setZero(inst_.antennas);
    const double inv_ln2 = 1.0 / std::numbers::ln2;
    off = 0;
    for (int k = 0; k < K; ++k) {
        const auto &ord = orders_[static_cast<std::size_t>(k)];
        const double *A = level_.data() + off;
        const std::size_t M = ord.size();
        off += M + 1;
        // dF/dlevel[m] from the two rates that level[m] enters.
        dlevel_.resize(M + 1);
        for (std::size_t m = 0; m <= M; ++m) {
            const double here = m < M ? weight_(ord[m], k) : 0.0;
            const double prev = m > 0 ? weight_(ord[m - 1], k) : 0.0;
            dlevel_[m] = (here - prev) * inv_ln2 / A[m];
        }
        // A gain at position p enters level[0..p]; an uncancelled gain enters all.
        double prefix = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            prefix += dlevel_[m];
            const int j = ord[m];
            (*grad)[static_cast<std::size_t>(j)] +=
                (2.0 * prefix * proj_(k, j)) * inst_.link(inst_.cell_of[static_cast<std::size_t>(j)], k);
        }
        prefix += dlevel_[M];
        if (prefix != 0.0)
            for (int j : uncancelled_[static_cast<std::size_t>(k)])
                (*grad)[static_cast<std::size_t>(j)] +=
                    (2.0 * prefix * proj_(k, j)) * inst_.link(inst_.cell_of[static_cast<std::size_t>(j)], k);
    }
    return total;
}

double smoothed_sum_rate(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &beams,
                         double beta)
{
    SmoothedObjective f(inst, sic, beta);
    f.refresh_orders(beams);
    return f.value(beams);
}

double smoothed_sum_rate(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &beams,
                         double beta, const DecodingOrders &orders)
{
    SmoothedObjective f(inst, sic, beta);
    f.set_orders(orders);
    return f.value(beams);
}

std::vector<double> analytic_gradient(const NetworkInstance &inst, const SicMatrix &sic,
                                      const BeamformingSolution &beams, double beta)
{
    SmoothedObjective f(inst, sic, beta);
    f.refresh_orders(beams);
    std::vector<CVec> g;
    f.value_and_gradient(beams, g);
    return flatten(BeamformingSolution{std::move(g)});
}

std::vector<double> central_difference_gradient(const std::function<double(std::span<const double>)> &f,
                                               std::span<const double> x, double h)
{
    if (!(h > 0.0))
        throw std::invalid_argument("finite difference step must be positive");
    std::vector<double> p(x.begin(), x.end());
    std::vector<double> g(p.size());
    for (std::size_t q = 0; q < p.size(); ++q) {
        const double x0 = p[q];
        p[q] = x0 + h;
        const double up = f(p);
        p[q] = x0 - h;
        const double dn = f(p);
        p[q] = x0;
        g[q] = (up - dn) / (2.0 * h);
    }
    return g;
}

namespace {

std::vector<double> central_differences(const SmoothedObjective &f, const BeamformingSolution &beams, double h)
{
    const int K = static_cast<int>(beams.w.size());
    const int N = K > 0 ? static_cast<int>(beams.w[0].size()) : 0;
    const auto x = flatten(beams);
    return central_difference_gradient([&](std::span<const double> p) { return f.value(unflatten(p, K, N)); }, x, h);
}

} // namespace

std::vector<double> finite_difference_gradient(const NetworkInstance &inst, const SicMatrix &sic,
                                               const BeamformingSolution &beams, double beta, double h)
{
    if (!(h > 0.0))
        throw std::invalid_argument("finite difference step must be positive");
    SmoothedObjective f(inst, sic, beta);
    f.refresh_orders(beams);
    return central_differences(f, beams, h);
}

namespace {

double inner(const std::vector<CVec> &a, const std::vector<CVec> &b)
{
    double s = 0.0;
    for (std::size_t u = 0; u < a.size(); ++u)
        s += a[u].dot(b[u]).real();
    return s;
}

} // namespace

BeamOptResult optimize_beams(const NetworkInstance &inst, const SicMatrix &sic, const BeamformingSolution &start,
                             const OptimizerConfig &cfg, std::span<const double> external)
{
    cfg.check();
    require_valid(sic, inst);
    const int K = inst.num_users();
    if (start.w.size() != static_cast<std::size_t>(K))
        throw std::invalid_argument("optimize_beams: initial beams have wrong user count");

    BeamformingSolution cur = start;
    project_to_budget(inst, cur);

    SmoothedObjective f(inst, sic, cfg.beta, external);
    f.refresh_orders(cur);

    auto gradient_at = [&](const BeamformingSolution &w, std::vector<CVec> &g) {
        if (cfg.grad_mode == GradMode::analytic)
            return f.value_and_gradient(w, g);
        const auto flat = central_differences(f, w, 1e-6);
        g = unflatten(flat, K, inst.antennas).w;
        return f.value(w);
    };

    std::vector<CVec> grad;
    double obj = gradient_at(cur, grad);
    if (!std::isfinite(obj))
        throw std::runtime_error("optimize_beams: non-finite objective at the initial point");

    BeamOptResult res;
    res.trace.initial_objective = obj;
    res.trace.initial_sum_rate = f.true_sum_rate(cur);
    res.beams = cur;
    res.sum_rate = res.trace.initial_sum_rate;

    double step = cfg.step_init;
    int since_refresh = 0;
    bool refreshed_now = false;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        if (since_refresh >= cfg.order_refresh_period) {
            f.refresh_orders(cur);
            obj = gradient_at(cur, grad);
            since_refresh = 0;
            refreshed_now = true;
        }

        // Backtracking search along the projected gradient path.
        BeamformingSolution trial;
        double trial_obj = obj;
        double t = std::min(2.0 * step, 1e6 * cfg.step_init);
        bool accepted = false;
        while (t > 1e-14 * cfg.step_init) {
            trial = cur;
            for (int u = 0; u < K; ++u)
                trial.w[static_cast<std::size_t>(u)] += t * grad[static_cast<std::size_t>(u)];
            project_to_budget(inst, trial);
            std::vector<CVec> delta(static_cast<std::size_t>(K));
            for (int u = 0; u < K; ++u)
                delta[static_cast<std::size_t>(u)] = trial.w[static_cast<std::size_t>(u)] - cur.w[static_cast<std::size_t>(u)];
            trial_obj = f.value(trial);
            if (!std::isfinite(trial_obj))
                throw std::runtime_error("optimize_beams: non-finite objective");
            const double ascent = inner(grad, delta);
            if (ascent > 0.0 && trial_obj > obj && trial_obj >= obj + cfg.armijo_c * ascent) {
                accepted = true;
                break;
            }
            t *= cfg.backtrack_factor;
        }

        if (!accepted) {
            // Stalled under stale orders: refresh once before giving up.
            if (since_refresh > 0 && !refreshed_now) {
                since_refresh = cfg.order_refresh_period;
                continue;
            }
            break;
        }

        OptimStep rec;
        rec.iteration = it;
        rec.objective_before = obj;
        rec.objective = trial_obj;
        rec.step = t;
        rec.orders_refreshed = refreshed_now;
        rec.cell_power = trial.cell_power(inst);
        rec.sum_rate = f.true_sum_rate(trial);

        const double change = std::abs(trial_obj - obj) / std::max(1.0, std::abs(obj));
        cur = std::move(trial);
        step = t;
        ++since_refresh;
        refreshed_now = false;
        ++res.iterations;
        if (rec.sum_rate > res.sum_rate) {
            res.sum_rate = rec.sum_rate;
            res.beams = cur;
        }
        res.trace.steps.push_back(std::move(rec));

        if (change < cfg.tol)
            break;
        obj = gradient_at(cur, grad);
        if (!std::isfinite(obj))
            throw std::runtime_error("optimize_beams: non-finite objective");
    }
    return res;
}

} // namespace noma
