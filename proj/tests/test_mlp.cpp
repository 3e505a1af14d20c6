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

#include "beamprint/errors.hpp"
#include "beamprint/mlp.hpp"
#include "beamprint/rng.hpp"

#include "doctest.h"
#include "mlp_oracle.hpp"

#include <cmath>
#include <limits>

using namespace beamprint;

namespace
{

MlpConfig small_config(std::vector<int> widths, Activation act = Activation::tanh)
{
    MlpConfig c;
    c.hidden_layer_widths = std::move(widths);
    c.hidden_activation = act;
    return c;
}

std::vector<FeatureVector> toy_set(int n, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<FeatureVector> out;
    for (int i = 0; i < n; ++i)
        out.push_back(FeatureVector{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                    {rng.uniform(0, 100), rng.uniform(0, 100)}});
    return out;
}

} // namespace

TEST_CASE("initialization")
{
    CHECK(glorot_bound(7, 64) == doctest::Approx(std::sqrt(6.0 / 71.0)).epsilon(1e-15));
    CHECK(glorot_bound(7, 64) == doctest::Approx(0.2907).epsilon(1e-4));

    const MlpModel a = init_mlp(small_config({64, 32}), 7);
    const MlpModel b = init_mlp(small_config({64, 32}), 7);
    REQUIRE(a.layers.size() == 3);
    CHECK(a.layers[0].inputs == 7);
    CHECK(a.layers[0].outputs == 64);
    CHECK(a.layers[2].outputs == 2);
    for (std::size_t l = 0; l < a.layers.size(); ++l)
    {
        CHECK(a.layers[l].weights == b.layers[l].weights);
        const double bound = glorot_bound(a.layers[l].inputs, a.layers[l].outputs);
        for (double w : a.layers[l].weights)
            CHECK(std::abs(w) <= bound);
        for (double bias : a.layers[l].bias)
            CHECK(bias == 0.0);
    }
    MlpConfig other = small_config({64, 32});
    other.rng_seed = 2;
    CHECK(init_mlp(other, 7).layers[0].weights != a.layers[0].weights);
}

TEST_CASE("config validation")
{
    MlpConfig c = small_config({});
    CHECK_THROWS_AS(init_mlp(c, 3), ConfigError);
    c = small_config({0});
    CHECK_THROWS_AS(init_mlp(c, 3), ConfigError);
    c = small_config({4});
    c.batch_size = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = small_config({4});
    c.adam.learning_rate = -1;
    CHECK_THROWS_AS(validate(c), ConfigError);
    CHECK_THROWS_AS(init_mlp(small_config({4}), 0), ConfigError);
    CHECK(descriptor(small_config({64, 64})) == "mlp_h64x64_tanh");
    CHECK(descriptor(small_config({128}, Activation::relu)) == "mlp_h128_relu");
}

TEST_CASE("forward pass")
{
    MlpModel m = init_mlp(small_config({1}), 1);
    for (auto &layer : m.layers)
    {
        std::fill(layer.weights.begin(), layer.weights.end(), 0.0);
        std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
    }
    m.layers[1].bias = {0.25, -4.0};
    const std::vector<double> x{123.0};
    CHECK(forward(m, x) == std::array<double, 2>{0.25, -4.0});

    // Hand-set scalars: h = tanh(0.5 * 2 + 0.1), out = (1.5 h - 0.2, -0.5 h + 0.3).
    m.layers[0].weights = {0.5};
    m.layers[0].bias = {0.1};
    m.layers[1].weights = {1.5, -0.5};
    m.layers[1].bias = {-0.2, 0.3};
    const std::vector<double> two{2.0};
    const double h = std::tanh(1.1);
    const auto out = forward(m, two);
    CHECK(out[0] == doctest::Approx(1.5 * h - 0.2).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(-0.5 * h + 0.3).epsilon(1e-12));

    // Zero biases with tanh make the network odd.
    const MlpModel odd = init_mlp(small_config({8, 8}), 4);
    const std::vector<double> p{0.3, -1.2, 0.7, 2.0};
    const std::vector<double> q{-0.3, 1.2, -0.7, -2.0};
    const auto fp = forward(odd, p), fq = forward(odd, q);
    CHECK(fp[0] == doctest::Approx(-fq[0]).epsilon(1e-12));
    CHECK(fp[1] == doctest::Approx(-fq[1]).epsilon(1e-12));

    const std::vector<double> wrong{1.0, 2.0};
    CHECK_THROWS_AS(forward(odd, wrong), DataError);
}

TEST_CASE("forward matches the scalar reference")
{
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial)
    {
        auto p = oracle::random_problem(rng, trial % 2 ? Activation::relu : Activation::tanh);
        for (std::size_t r = 0; r < p.x.rows; ++r)
        {
            const auto row = p.x.row(r);
            const auto ref = oracle::mlp_forward(p.model, std::vector<double>(row.begin(), row.end())).out;
            const auto got = forward(p.model, row);
            CHECK(got[0] == doctest::Approx(ref[0]).epsilon(1e-12));
            CHECK(got[1] == doctest::Approx(ref[1]).epsilon(1e-12));
        }
        CHECK(loss_and_gradients(p.model, p.x, p.y).mse == doctest::Approx(oracle::mlp_loss(p.model, p.x, p.y)).epsilon(1e-12));
    }
}

TEST_CASE("zero residual gives zero loss and gradients")
{
    MlpModel m = init_mlp(small_config({5}), 3);
    Matrix x(4, 3), y(4, 2);
    Rng rng(3);
    for (double &v : x.data)
        v = rng.uniform(-1, 1);
    for (std::size_t r = 0; r < 4; ++r)
    {
        const auto f = forward(m, x.row(r));
        y(r, 0) = f[0];
        y(r, 1) = f[1];
    }
    const auto lg = loss_and_gradients(m, x, y);
    CHECK(lg.mse == 0.0);
    for (const auto &layer : lg.gradients.weights)
        for (double g : layer)
            CHECK(g == 0.0);
}

TEST_CASE("duplicating the batch leaves loss and gradients unchanged")
{
    Rng rng(99);
    auto p = oracle::random_problem(rng, Activation::tanh);
    Matrix x2(p.x.rows * 2, p.x.cols), y2(p.y.rows * 2, 2);
    for (std::size_t r = 0; r < p.x.rows * 2; ++r)
    {
        std::copy(p.x.row(r % p.x.rows).begin(), p.x.row(r % p.x.rows).end(), x2.row(r).begin());
        std::copy(p.y.row(r % p.y.rows).begin(), p.y.row(r % p.y.rows).end(), y2.row(r).begin());
    }
    const auto a = loss_and_gradients(p.model, p.x, p.y);
    const auto b = loss_and_gradients(p.model, x2, y2);
    CHECK(b.mse == doctest::Approx(a.mse).epsilon(1e-12));
    for (std::size_t l = 0; l < a.gradients.weights.size(); ++l)
        for (std::size_t k = 0; k < a.gradients.weights[l].size(); ++k)
            CHECK(b.gradients.weights[l][k] == doctest::Approx(a.gradients.weights[l][k]).epsilon(1e-10));
}

TEST_CASE("analytic gradients agree with central differences")
{
    Rng rng(4242);
    int checked = 0;
    while (checked < 20)
    {
        const Activation act = checked % 2 ? Activation::relu : Activation::tanh;
        auto p = oracle::random_problem(rng, act);
        const auto lg = loss_and_gradients(p.model, p.x, p.y);
        const auto g = oracle::gradient_check(p.model, p.x, p.y, lg.gradients);
        if (g.near_kink)
            continue;
        CHECK(g.worst < 1e-4);
        ++checked;
    }
}

TEST_CASE("early stopping rule")
{
    MlpConfig c = small_config({4});
    c.patience = 1;
    c.min_delta = std::numeric_limits<double>::infinity();
    MlpModel m = init_mlp(c, 3);
    const TrainReport r = train(m, toy_set(20, 1));
    CHECK(r.epochs_run == 2);
    CHECK(r.stopped_early);
    CHECK(r.loss_history.size() == 2);
    CHECK(m.loss_history == r.loss_history);

    c.max_epochs = 7;
    c.min_delta = 0.0;
    c.patience = 1000;
    MlpModel full = init_mlp(c, 3);
    const TrainReport f = train(full, toy_set(20, 1));
    CHECK(f.epochs_run == 7);
    CHECK_FALSE(f.stopped_early);
}

TEST_CASE("small network memorizes a toy set")
{
    MlpConfig c = small_config({32});
    c.batch_size = 10;
    c.adam.learning_rate = 0.01;
    c.min_delta = 0.0;
    c.patience = 500;
    MlpModel m = init_mlp(c, 3);
    const TrainReport r = train(m, toy_set(10, 5));
    CHECK(r.epochs_run <= 500);
    CHECK(r.final_loss < 1e-3);
    for (double l : r.loss_history)
        CHECK(std::isfinite(l));
}

TEST_CASE("constant labels are learned")
{
    auto data = toy_set(200, 6);
    for (auto &v : data)
        v.label = {42.0, -7.0};
    MlpConfig c = small_config({8});
    c.max_epochs = 50;
    MlpModel m = init_mlp(c, 3);
    train(m, data);
    Rng rng(60);
    for (int i = 0; i < 20; ++i)
    {
        const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const auto p = predict(m, x);
        CHECK(std::abs(p[0] - 42.0) <= 0.1);
        CHECK(std::abs(p[1] + 7.0) <= 0.1);
    }
}

TEST_CASE("predict composes normalization, forward pass and inversion")
{
    const auto data = toy_set(64, 9);
    MlpConfig c = small_config({6});
    c.max_epochs = 5;
    MlpModel m = init_mlp(c, 3);
    CHECK_THROWS_AS(predict(m, data[0].values), ConfigError);
    train(m, data);
    for (const auto &v : data)
    {
        const auto manual = invert_labels(*m.normalizer, forward(m, beamprint::apply(*m.normalizer, v.values)));
        CHECK(predict(m, v.values) == manual);
    }
    const auto serial = predict_batch(m, data, Execution::serial);
    const auto parallel = predict_batch(m, data, Execution::parallel);
    REQUIRE(serial.size() == data.size());
    CHECK(serial == parallel);
    for (std::size_t i = 0; i < data.size(); ++i)
        CHECK(serial[i] == predict(m, data[i].values));
}

TEST_CASE("training is deterministic")
{
    const auto data = toy_set(100, 12);
    MlpConfig c = small_config({8, 8});
    c.max_epochs = 10;
    MlpModel a = init_mlp(c, 3), b = init_mlp(c, 3);
    train(a, data);
    train(b, data);
    CHECK(to_json(a) == to_json(b));
}

TEST_CASE("divergence is reported")
{
    auto data = toy_set(40, 13);
    data[3].values[0] = std::numeric_limits<double>::quiet_NaN();
    MlpConfig c = small_config({4});
    c.max_epochs = 3;
    MlpModel m = init_mlp(c, 3);
    CHECK_THROWS_AS(train(m, data), DivergenceError);
}

TEST_CASE("model JSON round trip is exact")
{
    const auto data = toy_set(50, 14);
    MlpConfig c = small_config({5, 3}, Activation::relu);
    c.max_epochs = 4;
    MlpModel m = init_mlp(c, 3);
    train(m, data);
    const MlpModel back = mlp_from_json(nlohmann::json::parse(to_json(m).dump()));
    CHECK(back.input_width == m.input_width);
    for (std::size_t l = 0; l < m.layers.size(); ++l)
    {
        CHECK(back.layers[l].weights == m.layers[l].weights);
        CHECK(back.layers[l].bias == m.layers[l].bias);
    }
    for (const auto &v : data)
        CHECK(predict(back, v.values) == predict(m, v.values));
    CHECK(mlp_config_from_json(to_json(c)).hidden_layer_widths == c.hidden_layer_widths);
    auto bad = to_json(m);
    bad["version"] = 99;
    CHECK_THROWS_AS(mlp_from_json(bad), DataError);
}
