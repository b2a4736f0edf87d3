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

#include "noma/gnn.hpp"
#include "noma/beamforming.hpp"
#include "noma/rng.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace noma {

std::string to_string(Aggregation a)
{
    switch (a) {
    case Aggregation::max: return "max";
    case Aggregation::sum: return "sum";
    case Aggregation::mean: return "mean";
    }
    return "mean";
}

Aggregation parse_aggregation(std::string_view text)
{
    if (text == "max")
        return Aggregation::max;
    if (text == "sum")
        return Aggregation::sum;
    if (text == "mean")
        return Aggregation::mean;
    throw std::invalid_argument("unknown aggregation '" + std::string(text) + "'");
}

void GnnArchitecture::check() const
{
    if (depth < 1)
        throw std::invalid_argument("gnn depth must be >= 1");
    if (embed_size.size() != static_cast<std::size_t>(depth))
        throw std::invalid_argument("gnn embed_size must list one size per layer");
    for (int s : embed_size)
        if (s < 1)
            throw std::invalid_argument("gnn embedding sizes must be >= 1");
    if (hidden_width < 1)
        throw std::invalid_argument("gnn hidden_width must be >= 1");
}

namespace {

int feature_dim(int users_per_cell, int antennas)
{
    return 2 * users_per_cell * antennas;
}

DenseLayer make_layer(int out, int in, Stream *s)
{
    DenseLayer l{Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)};
    if (s) {
        const double scale = std::sqrt(2.0 / in);
        for (int r = 0; r < out; ++r) {
            for (int c = 0; c < in; ++c)
                l.weight(r, c) = scale * s->normal();
            l.bias[r] = 0.01 * s->normal();
        }
    }
    return l;
}

GnnWeights build(const GnnArchitecture &arch, int users_per_cell, int antennas, Stream *s)
{
    arch.check();
    const int F = feature_dim(users_per_cell, antennas);
    const int H = arch.hidden_width;
    GnnWeights w;
    w.input = make_layer(H, F, s);
    for (int l = 0; l < arch.depth; ++l) {
        const int S = arch.embed_size[static_cast<std::size_t>(l)];
        w.encoders.push_back(make_layer(S, H + F, s));
        w.combiners.push_back(make_layer(H, H + S + F, s));
    }
    w.output = make_layer(F, H, s);
    return w;
}

void check_layer(const DenseLayer &l, int out, int in, const std::string &name)
{
    if (l.weight.rows() != out || l.weight.cols() != in || l.bias.size() != out)
        throw std::invalid_argument("gnn weights: " + name + " should be " + std::to_string(out) + "x" +
                                    std::to_string(in) + ", got " + std::to_string(l.weight.rows()) + "x" +
                                    std::to_string(l.weight.cols()));
}

Eigen::VectorXd relu(Eigen::VectorXd v)
{
    return v.cwiseMax(0.0);
}

} // namespace

GnnWeights GnnWeights::random(const GnnArchitecture &arch, int users_per_cell, int antennas, std::uint64_t seed)
{
    Stream s(mix_seed(seed, {0x676E6EULL}));
    return build(arch, users_per_cell, antennas, &s);
}

GnnWeights GnnWeights::zeros(const GnnArchitecture &arch, int users_per_cell, int antennas)
{
    return build(arch, users_per_cell, antennas, nullptr);
}

void GnnWeights::check(const GnnArchitecture &arch, int users_per_cell, int antennas) const
{
    arch.check();
    const int F = feature_dim(users_per_cell, antennas);
    const int H = arch.hidden_width;
    check_layer(input, H, F, "input");
    if (encoders.size() != static_cast<std::size_t>(arch.depth) ||
        combiners.size() != static_cast<std::size_t>(arch.depth))
        throw std::invalid_argument("gnn weights: layer count differs from depth");
    for (int l = 0; l < arch.depth; ++l) {
        const int S = arch.embed_size[static_cast<std::size_t>(l)];
        check_layer(encoders[static_cast<std::size_t>(l)], S, H + F, "encoder." + std::to_string(l));
        check_layer(combiners[static_cast<std::size_t>(l)], H, H + S + F, "combiner." + std::to_string(l));
    }
    check_layer(output, F, H, "output");
}

// ---- NOMAGNN1 container ----

namespace {

constexpr std::string_view kMagic = "NOMAGNN1";

void write_array(std::ostream &os, const std::string &name, const Eigen::MatrixXd &m)
{
    os << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    char buf[64];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, m(r, c));
            (void)ec;
            if (c)
                os << ' ';
            os.write(buf, end - buf);
        }
        os << '\n';
    }
}

Eigen::MatrixXd read_array(std::istream &is, const std::string &expected)
{
    std::string name;
    long rows = -1, cols = -1;
    if (!(is >> name >> rows >> cols))
        throw std::runtime_error("gnn weights: truncated header before '" + expected + "'");
    if (name != expected)
        throw std::runtime_error("gnn weights: expected array '" + expected + "', found '" + name + "'");
    if (rows < 0 || cols < 0)
        throw std::runtime_error("gnn weights: negative shape for '" + name + "'");
    Eigen::MatrixXd m(rows, cols);
    std::string tok;
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) {
            if (!(is >> tok))
                throw std::runtime_error("gnn weights: truncated data in '" + name + "'");
            double v = 0.0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || p != tok.data() + tok.size())
                throw std::runtime_error("gnn weights: bad number '" + tok + "' in '" + name + "'");
            m(r, c) = v;
        }
    return m;
}

std::vector<std::pair<std::string, const DenseLayer *>> named_layers(const GnnWeights &w)
{
    std::vector<std::pair<std::string, const DenseLayer *>> out{{"input", &w.input}};
    for (std::size_t l = 0; l < w.encoders.size(); ++l) {
        out.emplace_back("encoder." + std::to_string(l), &w.encoders[l]);
        out.emplace_back("combiner." + std::to_string(l), &w.combiners[l]);
    }
    out.emplace_back("output", &w.output);
    return out;
}

} // namespace

void save_weights(const GnnWeights &w, std::ostream &os)
{
    if (w.encoders.size() != w.combiners.size())
        throw std::invalid_argument("gnn weights: encoder/combiner count mismatch");
    const auto layers = named_layers(w);
    os << kMagic << '\n' << "arrays " << 2 * layers.size() << '\n';
    for (const auto &[name, l] : layers) {
        write_array(os, name + ".weight", l->weight);
        write_array(os, name + ".bias", l->bias);
    }
}

GnnWeights load_weights(std::istream &is)
{
    std::string magic;
    if (!(is >> magic) || magic != kMagic)
        throw std::runtime_error("gnn weights: missing NOMAGNN1 magic");
    std::string key;
    long n = 0;
    if (!(is >> key >> n) || key != "arrays" || n < 4 || n % 4 != 0)
        throw std::runtime_error("gnn weights: bad array count line");
    const long depth = (n - 4) / 4;

    auto read_layer = [&](const std::string &name) {
        DenseLayer l;
        l.weight = read_array(is, name + ".weight");
        const Eigen::MatrixXd b = read_array(is, name + ".bias");
        if (b.cols() != 1)
            throw std::runtime_error("gnn weights: bias '" + name + "' must be a column");
        l.bias = b.col(0);
        return l;
    };
    GnnWeights w;
    w.input = read_layer("input");
    for (long l = 0; l < depth; ++l) {
        w.encoders.push_back(read_layer("encoder." + std::to_string(l)));
        w.combiners.push_back(read_layer("combiner." + std::to_string(l)));
    }
    w.output = read_layer("output");
    return w;
}

void save_weights(const GnnWeights &w, const std::filesystem::path &path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    save_weights(w, os);
    if (!os)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

GnnWeights load_weights(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    return load_weights(is);
}

// ---- forward pass ----

namespace {

Eigen::VectorXd flatten_links(const NetworkInstance &inst, int bs, int cell)
{
    Eigen::VectorXd x(feature_dim(inst.users_per_cell, inst.antennas));
    Eigen::Index p = 0;
    for (int u : inst.users_in(cell)) {
        const CVec &h = inst.link(bs, u);
        for (int a = 0; a < inst.antennas; ++a) {
            x[p++] = h[a].real();
            x[p++] = h[a].imag();
        }
    }
    return x;
}

Eigen::VectorXd stack(std::initializer_list<const Eigen::VectorXd *> parts)
{
    Eigen::Index n = 0;
    for (auto *p : parts)
        n += p->size();
    Eigen::VectorXd out(n);
    Eigen::Index at = 0;
    for (auto *p : parts) {
        out.segment(at, p->size()) = *p;
        at += p->size();
    }
    return out;
}

} // namespace

GnnResult gnn_forward(const NetworkInstance &inst, const GnnArchitecture &arch, const GnnWeights &weights)
{
    weights.check(arch, inst.users_per_cell, inst.antennas);
    const int B = inst.num_cells;

    std::vector<Eigen::VectorXd> node(static_cast<std::size_t>(B));
    std::vector<Eigen::VectorXd> hidden(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        node[static_cast<std::size_t>(b)] = flatten_links(inst, b, b);
        hidden[static_cast<std::size_t>(b)] = relu(weights.input.affine(node[static_cast<std::size_t>(b)]));
    }

    GnnResult res;
    for (int l = 0; l < arch.depth; ++l) {
        const int S = arch.embed_size[static_cast<std::size_t>(l)];
        const DenseLayer &enc = weights.encoders[static_cast<std::size_t>(l)];
        const DenseLayer &comb = weights.combiners[static_cast<std::size_t>(l)];

        // Round l + 1: all messages come from the layer-l hidden states.
        std::vector<Eigen::VectorXd> agg(static_cast<std::size_t>(B), Eigen::VectorXd::Zero(S));
        std::vector<int> received(static_cast<std::size_t>(B), 0);
        for (int src = 0; src < B; ++src)
            for (int dst = 0; dst < B; ++dst) {
                if (src == dst)
                    continue;
                const Eigen::VectorXd edge = flatten_links(inst, src, dst);
                const Eigen::VectorXd msg = relu(enc.affine(stack({&hidden[static_cast<std::size_t>(src)], &edge})));
                res.ledger.record(l + 1, src, dst, S, 0);
                auto &a = agg[static_cast<std::size_t>(dst)];
                int &n = received[static_cast<std::size_t>(dst)];
                if (arch.aggregation == Aggregation::max)
                    a = n == 0 ? msg : Eigen::VectorXd(a.cwiseMax(msg));
                else
                    a += msg;
                ++n;
            }
        if (arch.aggregation == Aggregation::mean)
            for (int b = 0; b < B; ++b)
                if (received[static_cast<std::size_t>(b)] > 0)
                    agg[static_cast<std::size_t>(b)] /= received[static_cast<std::size_t>(b)];

        std::vector<Eigen::VectorXd> next(static_cast<std::size_t>(B));
        for (int b = 0; b < B; ++b) {
            const auto ub = static_cast<std::size_t>(b);
            next[ub] = relu(comb.affine(stack({&hidden[ub], &agg[ub], &node[ub]})));
        }
        hidden = std::move(next);
    }

    res.beams.w.assign(static_cast<std::size_t>(inst.num_users()), CVec::Zero(inst.antennas));
    for (int b = 0; b < B; ++b) {
        const Eigen::VectorXd y = weights.output.affine(hidden[static_cast<std::size_t>(b)]);
        res.raw_output.push_back(y);
        const bool degenerate = !y.allFinite() || y.isZero(0.0);
        res.used_fallback.push_back(degenerate);
        if (degenerate) {
            zf_init(inst, b, res.beams);
            continue;
        }
        Eigen::Index p = 0;
        for (int u : inst.users_in(b)) {
            CVec &w = res.beams.w[static_cast<std::size_t>(u)];
            for (int a = 0; a < inst.antennas; ++a, p += 2)
                w[a] = cplx(y[p], y[p + 1]);
        }
    }
    project_to_budget(inst, res.beams);
    return res;
}

std::int64_t gnn_overhead_closed_form(const GnnArchitecture &arch, int num_cells)
{
    arch.check();
    std::int64_t total_embed = 0;
    for (int s : arch.embed_size)
        total_embed += s;
    const std::int64_t B = num_cells;
    return kBitsPerReal * B * (B - 1) * total_embed;
}

} // namespace noma
