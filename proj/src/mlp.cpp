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

#include "beamprint/mlp.hpp"

#include "beamprint/errors.hpp"
#include "beamprint/json_keys.hpp"
#include "beamprint/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace beamprint
{

std::string to_string(Activation a)
{
    return a == Activation::tanh ? "tanh" : "relu";
}

Activation activation_from_string(const std::string &s)
{
    if (s == "tanh")
        return Activation::tanh;
    if (s == "relu")
        return Activation::relu;
    throw ConfigError("unknown activation '" + s + "' (expected tanh or relu)");
}

void validate(const MlpConfig &c)
{
    if (c.hidden_layer_widths.empty())
        throw ConfigError("network needs at least one hidden layer");
    for (int w : c.hidden_layer_widths)
        if (w < 1)
            throw ConfigError("hidden layer widths must be positive");
    if (c.batch_size < 1)
        throw ConfigError("batch size must be at least 1");
    if (c.max_epochs < 1)
        throw ConfigError("max_epochs must be at least 1");
    if (c.patience < 1)
        throw ConfigError("patience must be at least 1");
    if (!(c.min_delta >= 0.0))
        throw ConfigError("min_delta must be non-negative");
    if (!(c.adam.learning_rate > 0.0) || !(c.adam.beta1 >= 0.0 && c.adam.beta1 < 1.0) ||
        !(c.adam.beta2 >= 0.0 && c.adam.beta2 < 1.0) || !(c.adam.epsilon > 0.0))
        throw ConfigError("invalid adam parameters");
}

std::string descriptor(const MlpConfig &c)
{
    std::string d = "mlp_h";
    for (std::size_t i = 0; i < c.hidden_layer_widths.size(); ++i)
        d += (i ? "x" : "") + std::to_string(c.hidden_layer_widths[i]);
    if (c.hidden_layer_widths.empty())
        d += "0";
    return d + "_" + to_string(c.hidden_activation);
}

nlohmann::json to_json(const MlpConfig &c)
{
    return nlohmann::json{{"hidden", c.hidden_layer_widths},
                          {"activation", to_string(c.hidden_activation)},
                          {"batch_size", c.batch_size},
                          {"max_epochs", c.max_epochs},
                          {"learning_rate", c.adam.learning_rate},
                          {"beta1", c.adam.beta1},
                          {"beta2", c.adam.beta2},
                          {"epsilon", c.adam.epsilon},
                          {"patience", c.patience},
                          {"min_delta", c.min_delta},
                          {"seed", c.rng_seed}};
}

MlpConfig mlp_config_from_json(const nlohmann::json &j)
{
    reject_unknown_keys(j, {"type", "hidden", "activation", "batch_size", "max_epochs", "learning_rate", "beta1", "beta2", "epsilon",
                            "patience", "min_delta", "seed"},
                        "mlp config");
    MlpConfig c;
    try
    {
        c.hidden_layer_widths = j.value("hidden", c.hidden_layer_widths);
        c.hidden_activation = activation_from_string(j.value("activation", std::string("tanh")));
        c.batch_size = j.value("batch_size", c.batch_size);
        c.max_epochs = j.value("max_epochs", c.max_epochs);
        c.adam.learning_rate = j.value("learning_rate", c.adam.learning_rate);
        c.adam.beta1 = j.value("beta1", c.adam.beta1);
        c.adam.beta2 = j.value("beta2", c.adam.beta2);
        c.adam.epsilon = j.value("epsilon", c.adam.epsilon);
        c.patience = j.value("patience", c.patience);
        c.min_delta = j.value("min_delta", c.min_delta);
        c.rng_seed = j.value("seed", c.rng_seed);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("malformed mlp config: ") + e.what());
    }
    validate(c);
    return c;
}

double glorot_bound(std::size_t fan_in, std::size_t fan_out)
{
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

MlpModel init_mlp(const MlpConfig &config, std::size_t input_width)
{
    validate(config);
    if (input_width < 1)
        throw ConfigError("network input width must be at least 1");
    MlpModel model;
    model.config = config;
    model.input_width = input_width;
    Rng rng(config.rng_seed);
    std::size_t fan_in = input_width;
    std::vector<std::size_t> widths(config.hidden_layer_widths.begin(), config.hidden_layer_widths.end());
    widths.push_back(2);
    for (std::size_t fan_out : widths)
    {
        DenseLayer layer;
        layer.inputs = fan_in;
        layer.outputs = fan_out;
        layer.weights.resize(fan_in * fan_out);
        layer.bias.assign(fan_out, 0.0);
        const double bound = glorot_bound(fan_in, fan_out);
        for (double &w : layer.weights)
            w = rng.uniform(-bound, bound);
        model.layers.push_back(std::move(layer));
        fan_in = fan_out;
    }
    return model;
}

namespace
{

inline double activate(Activation a, double z)
{
    return a == Activation::tanh ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

// Derivative expressed through the activation's output.
inline double activation_slope(Activation a, double out)
{
    return a == Activation::tanh ? 1.0 - out * out : (out > 0.0 ? 1.0 : 0.0);
}

// Batch buffers: activations[0] is the input batch, activations[l + 1] the output of
// layer l.
struct Workspace
{
    std::vector<Matrix> activations;
    std::vector<Matrix> deltas;

    void resize(const MlpModel &model, std::size_t batch)
    {
        activations.resize(model.layers.size() + 1);
        deltas.resize(model.layers.size());
        activations[0] = Matrix(batch, model.input_width);
        for (std::size_t l = 0; l < model.layers.size(); ++l)
        {
            activations[l + 1] = Matrix(batch, model.layers[l].outputs);
            deltas[l] = Matrix(batch, model.layers[l].outputs);
        }
    }
};

void layer_forward(const DenseLayer &layer, bool hidden, Activation act, std::span<const double> in, std::span<double> out)
{
    const double *w = layer.weights.data();
    for (std::size_t o = 0; o < layer.outputs; ++o, w += layer.inputs)
    {
        double z = layer.bias[o];
        for (std::size_t i = 0; i < layer.inputs; ++i)
            z += w[i] * in[i];
        out[o] = hidden ? activate(act, z) : z;
    }
}

MlpGradients zero_gradients(const MlpModel &model)
{
    MlpGradients g;
    for (const DenseLayer &layer : model.layers)
    {
        g.weights.emplace_back(layer.weights.size(), 0.0);
        g.bias.emplace_back(layer.bias.size(), 0.0);
    }
    return g;
}

void clear(MlpGradients &g)
{
    for (auto &w : g.weights)
        std::fill(w.begin(), w.end(), 0.0);
    for (auto &b : g.bias)
        std::fill(b.begin(), b.end(), 0.0);
}

// Forward + backward over the rows of `inputs` selected by `rows`. Gradients are
// overwritten; returns the batch MSE.
double batch_pass(const MlpModel &model, const Matrix &inputs, const Matrix &targets, std::span<const std::size_t> rows,
                  Workspace &ws, MlpGradients &grads)
{
    const std::size_t batch = rows.size();
    const std::size_t n_layers = model.layers.size();
    const Activation act = model.config.hidden_activation;
    if (ws.activations.empty() || ws.activations[0].rows != batch)
        ws.resize(model, batch);

    for (std::size_t s = 0; s < batch; ++s)
    {
        const auto src = inputs.row(rows[s]);
        std::copy(src.begin(), src.end(), ws.activations[0].row(s).begin());
    }
    for (std::size_t l = 0; l < n_layers; ++l)
        for (std::size_t s = 0; s < batch; ++s)
            layer_forward(model.layers[l], l + 1 < n_layers, act, ws.activations[l].row(s), ws.activations[l + 1].row(s));

    // d(mse)/d(out) = (out - y) / batch, mse averaged over batch and both outputs
    double sse = 0.0;
    const double scale = 1.0 / static_cast<double>(batch);
    Matrix &out = ws.activations[n_layers];
    Matrix &top = ws.deltas[n_layers - 1];
    for (std::size_t s = 0; s < batch; ++s)
        for (std::size_t k = 0; k < 2; ++k)
        {
            const double e = out(s, k) - targets(rows[s], k);
            sse += e * e;
            top(s, k) = e * scale;
        }

    clear(grads);
    for (std::size_t l = n_layers; l-- > 0;)
    {
        const DenseLayer &layer = model.layers[l];
        const Matrix &delta = ws.deltas[l];
        const Matrix &in = ws.activations[l];
        double *gw = grads.weights[l].data();
        double *gb = grads.bias[l].data();
        for (std::size_t s = 0; s < batch; ++s)
        {
            const double *a = in.row(s).data();
            for (std::size_t o = 0; o < layer.outputs; ++o)
            {
                const double d = delta(s, o);
                double *row = gw + o * layer.inputs;
                for (std::size_t i = 0; i < layer.inputs; ++i)
                    row[i] += d * a[i];
                gb[o] += d;
            }
        }
        if (l == 0)
            break;
        Matrix &below = ws.deltas[l - 1];
        for (std::size_t s = 0; s < batch; ++s)
        {
            double *back = below.row(s).data();
            std::fill(back, back + layer.inputs, 0.0);
            for (std::size_t o = 0; o < layer.outputs; ++o)
            {
                const double d = delta(s, o);
                const double *w = layer.weights.data() + o * layer.inputs;
                for (std::size_t i = 0; i < layer.inputs; ++i)
                    back[i] += d * w[i];
            }
            const double *a = in.row(s).data();
            for (std::size_t i = 0; i < layer.inputs; ++i)
                back[i] *= activation_slope(act, a[i]);
        }
    }
    return sse / (2.0 * static_cast<double>(batch));
}

void check_width(const MlpModel &model, std::size_t width)
{
    if (width != model.input_width)
        throw DataError("feature width " + std::to_string(width) + " does not match network input width " +
                        std::to_string(model.input_width));
}

} // namespace

std::array<double, 2> forward(const MlpModel &model, std::span<const double> features)
{
    check_width(model, features.size());
    std::vector<double> current(features.begin(), features.end());
    std::vector<double> next;
    for (std::size_t l = 0; l < model.layers.size(); ++l)
    {
        next.assign(model.layers[l].outputs, 0.0);
        layer_forward(model.layers[l], l + 1 < model.layers.size(), model.config.hidden_activation, current, next);
        current.swap(next);
    }
    return {current[0], current[1]};
}

LossAndGradients loss_and_gradients(const MlpModel &model, const Matrix &inputs, const Matrix &targets)
{
    if (inputs.rows == 0 || inputs.rows != targets.rows || targets.cols != 2)
        throw DataError("loss_and_gradients needs a non-empty batch with 2-wide targets");
    check_width(model, inputs.cols);
    std::vector<std::size_t> rows(inputs.rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Workspace ws;
    LossAndGradients out;
    out.gradients = zero_gradients(model);
    out.mse = batch_pass(model, inputs, targets, rows, ws, out.gradients);
    return out;
}

AdamOptimizer::AdamOptimizer(const MlpModel &model, AdamParams params)
    : params_(params), m_(zero_gradients(model)), v_(zero_gradients(model))
{
}

void AdamOptimizer::step(MlpModel &model, const MlpGradients &g)
{
    ++t_;
    const double b1 = params_.beta1;
    const double b2 = params_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    const double lr = params_.learning_rate;
    const double eps = params_.epsilon;
    auto update = [&](std::vector<double> &theta, const std::vector<double> &grad, std::vector<double> &m, std::vector<double> &v) {
        for (std::size_t i = 0; i < theta.size(); ++i)
        {
            m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
            v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
            theta[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    };
    for (std::size_t l = 0; l < model.layers.size(); ++l)
    {
        update(model.layers[l].weights, g.weights[l], m_.weights[l], v_.weights[l]);
        update(model.layers[l].bias, g.bias[l], m_.bias[l], v_.bias[l]);
    }
}

TrainReport train_normalized(MlpModel &model, const Matrix &inputs, const Matrix &targets)
{
    const MlpConfig &cfg = model.config;
    validate(cfg);
    if (inputs.rows == 0 || inputs.rows != targets.rows || targets.cols != 2)
        throw DataError("training needs at least one sample with 2-wide targets");
    check_width(model, inputs.cols);

    const std::size_t n = inputs.rows;
    const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(hash_combine(cfg.rng_seed, 0x5348554646ULL));
    AdamOptimizer adam(model, cfg.adam);
    MlpGradients grads = zero_gradients(model);
    Workspace full;
    Workspace tail;

    TrainReport report;
    double best = std::numeric_limits<double>::infinity();
    int stale = 0;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch)
    {
        shuffle_rng.shuffle(std::span<std::size_t>(order));
        double weighted = 0.0;
        for (std::size_t start = 0; start < n; start += batch)
        {
            const std::size_t count = std::min(batch, n - start);
            Workspace &ws = count == batch ? full : tail;
            const double mse = batch_pass(model, inputs, targets, std::span<const std::size_t>(order).subspan(start, count), ws, grads);
            if (!std::isfinite(mse))
                throw DivergenceError("training loss became non-finite in epoch " + std::to_string(epoch + 1));
            adam.step(model, grads);
            weighted += mse * static_cast<double>(count);
        }
        const double loss = weighted / static_cast<double>(n);
        report.loss_history.push_back(loss);
        ++report.epochs_run;

        if (epoch == 0 || loss < best - cfg.min_delta)
        {
            best = loss;
            stale = 0;
        }
        else if (++stale >= cfg.patience)
        {
            report.stopped_early = report.epochs_run < cfg.max_epochs;
            break;
        }
    }
    report.final_loss = report.loss_history.back();
    model.loss_history = report.loss_history;
    return report;
}

TrainReport train(MlpModel &model, std::span<const FeatureVector> training)
{
    if (training.empty())
        throw DataError("cannot train on an empty set");
    NormalizationStats stats = fit_normalizer(training);
    check_width(model, stats.width());
    Matrix inputs(training.size(), stats.width());
    Matrix targets(training.size(), 2);
    for (std::size_t i = 0; i < training.size(); ++i)
    {
        const auto &v = training[i].values;
        std::copy(v.begin(), v.end(), inputs.row(i).begin());
        apply_in_place(stats, inputs.row(i));
        const auto z = normalize_label(stats, training[i].label);
        targets(i, 0) = z[0];
        targets(i, 1) = z[1];
    }
    model.normalizer = std::move(stats);
    return train_normalized(model, inputs, targets);
}

std::array<double, 2> predict(const MlpModel &model, std::span<const double> features)
{
    if (!model.normalizer)
        throw ConfigError("model has no bound normalizer");
    return invert_labels(*model.normalizer, forward(model, apply(*model.normalizer, features)));
}

std::vector<std::array<double, 2>> predict_batch(const MlpModel &model, std::span<const FeatureVector> vectors, Execution exec)
{
    if (!model.normalizer)
        throw ConfigError("model has no bound normalizer");
    for (const FeatureVector &v : vectors)
        check_width(model, v.values.size());
    std::vector<std::array<double, 2>> out(vectors.size());
    for_each_index(vectors.size(), exec, [&](std::size_t i) { out[i] = predict(model, vectors[i].values); });
    return out;
}

nlohmann::json to_json(const MlpModel &model)
{
    nlohmann::json layers = nlohmann::json::array();
    for (const DenseLayer &l : model.layers)
        layers.push_back({{"inputs", l.inputs}, {"outputs", l.outputs}, {"weights", l.weights}, {"bias", l.bias}});
    nlohmann::json j{{"format", "beamprint-mlp"},
                     {"version", 1},
                     {"config", to_json(model.config)},
                     {"input_width", model.input_width},
                     {"layers", layers},
                     {"loss_history", model.loss_history}};
    j["normalizer"] = model.normalizer ? to_json(*model.normalizer) : nlohmann::json(nullptr);
    return j;
}

MlpModel mlp_from_json(const nlohmann::json &j)
{
    try
    {
        if (j.at("format").get<std::string>() != "beamprint-mlp" || j.at("version").get<int>() != 1)
            throw DataError("not a version 1 beamprint-mlp model");
        MlpModel m;
        m.config = mlp_config_from_json(j.at("config"));
        m.input_width = j.at("input_width").get<std::size_t>();
        std::size_t expect_in = m.input_width;
        for (const auto &jl : j.at("layers"))
        {
            DenseLayer l;
            l.inputs = jl.at("inputs").get<std::size_t>();
            l.outputs = jl.at("outputs").get<std::size_t>();
            l.weights = jl.at("weights").get<std::vector<double>>();
            l.bias = jl.at("bias").get<std::vector<double>>();
            if (l.inputs != expect_in || l.weights.size() != l.inputs * l.outputs || l.bias.size() != l.outputs)
                throw DataError("layer dimensions do not chain");
            expect_in = l.outputs;
            m.layers.push_back(std::move(l));
        }
        if (m.layers.empty() || expect_in != 2 || m.layers.size() != m.config.hidden_layer_widths.size() + 1)
            throw DataError("model layers do not match its config");
        m.loss_history = j.at("loss_history").get<std::vector<double>>();
        if (!j.at("normalizer").is_null())
            m.normalizer = normalizer_from_json(j.at("normalizer"));
        return m;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw DataError(std::string("malformed mlp model: ") + e.what());
    }
}

} // namespace beamprint
