// SPDX-License-Identifier: Apache-2.0
//
// beamprint: beam-RSRP fingerprint positioning laboratory
// Copyright (C) 2026 The beamprint authors
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

// Scalar reference forward pass and finite-difference gradient check for MlpModel.

#include "beamprint/matrix.hpp"
#include "beamprint/mlp.hpp"
#include "beamprint/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle
{

struct ForwardTrace
{
    std::array<double, 2> out{0.0, 0.0};
    double min_abs_preactivation = 1e300; // hidden layers only
};

inline ForwardTrace mlp_forward(const beamprint::MlpModel &m, const std::vector<double> &x)
{
    ForwardTrace t;
    std::vector<double> a = x;
    for (std::size_t l = 0; l < m.layers.size(); ++l)
    {
        const auto &layer = m.layers[l];
        const bool hidden = l + 1 < m.layers.size();
        std::vector<double> next(layer.outputs);
        for (std::size_t o = 0; o < layer.outputs; ++o)
        {
            double z = layer.bias[o];
            for (std::size_t i = 0; i < layer.inputs; ++i)
                z += layer.weights[o * layer.inputs + i] * a[i];
            if (hidden)
            {
                t.min_abs_preactivation = std::min(t.min_abs_preactivation, std::abs(z));
                z = m.config.hidden_activation == beamprint::Activation::tanh ? std::tanh(z) : std::max(z, 0.0);
            }
            next[o] = z;
        }
        a = std::move(next);
    }
    t.out = {a[0], a[1]};
    return t;
}

// Half mean squared error summed over both outputs: sum ||f(x)-y||^2 / (2B).
inline double mlp_loss(const beamprint::MlpModel &m, const beamprint::Matrix &x, const beamprint::Matrix &y)
{
    double s = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r)
    {
        const auto row = x.row(r);
        const auto f = mlp_forward(m, std::vector<double>(row.begin(), row.end())).out;
        s += (f[0] - y(r, 0)) * (f[0] - y(r, 0)) + (f[1] - y(r, 1)) * (f[1] - y(r, 1));
    }
    return s / (2.0 * static_cast<double>(x.rows));
}

inline double relative_error(double a, double b, double floor = 1e-6)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

struct GradCheck
{
    double worst = 0.0;
    std::size_t parameters = 0;
    bool near_kink = false; // a ReLU pre-activation came within the FD step
};

// Central differences with step h on every weight and bias, compared to analytic.
inline GradCheck gradient_check(beamprint::MlpModel m, const beamprint::Matrix &x, const beamprint::Matrix &y,
                                const beamprint::MlpGradients &analytic, double h = 1e-5)
{
    GradCheck g;
    if (m.config.hidden_activation == beamprint::Activation::relu)
        for (std::size_t r = 0; r < x.rows; ++r)
        {
            const auto row = x.row(r);
            if (mlp_forward(m, std::vector<double>(row.begin(), row.end())).min_abs_preactivation < 1e-3)
                g.near_kink = true;
        }
    auto probe = [&](double &p, double grad) {
        const double keep = p;
        p = keep + h;
        const double up = mlp_loss(m, x, y);
        p = keep - h;
        const double down = mlp_loss(m, x, y);
        p = keep;
        g.worst = std::max(g.worst, relative_error(grad, (up - down) / (2.0 * h)));
        ++g.parameters;
    };
    for (std::size_t l = 0; l < m.layers.size(); ++l)
    {
        for (std::size_t k = 0; k < m.layers[l].weights.size(); ++k)
            probe(m.layers[l].weights[k], analytic.weights[l][k]);
        for (std::size_t k = 0; k < m.layers[l].bias.size(); ++k)
            probe(m.layers[l].bias[k], analytic.bias[l][k]);
    }
    return g;
}

// A random small network with non-zero biases and a random batch.
struct RandomProblem
{
    beamprint::MlpModel model;
    beamprint::Matrix x;
    beamprint::Matrix y;
};

inline RandomProblem random_problem(beamprint::Rng &rng, beamprint::Activation act)
{
    beamprint::MlpConfig cfg;
    cfg.hidden_activation = act;
    cfg.hidden_layer_widths.clear();
    const int depth = 1 + static_cast<int>(rng.below(3));
    for (int d = 0; d < depth; ++d)
        cfg.hidden_layer_widths.push_back(1 + static_cast<int>(rng.below(8)));
    cfg.rng_seed = rng.next_u64();
    const std::size_t in = 1 + rng.below(8);
    RandomProblem p{beamprint::init_mlp(cfg, in), beamprint::Matrix(1 + rng.below(6), in), {}};
    for (auto &layer : p.model.layers)
        for (double &b : layer.bias)
            b = rng.uniform(-0.5, 0.5);
    p.y = beamprint::Matrix(p.x.rows, 2);
    for (double &v : p.x.data)
        v = rng.uniform(-2.0, 2.0);
    for (double &v : p.y.data)
        v = rng.uniform(-1.0, 1.0);
    return p;
}

} // namespace oracle
