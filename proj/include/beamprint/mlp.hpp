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

#include "beamprint/features.hpp"
#include "beamprint/matrix.hpp"
#include "beamprint/parallel.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace beamprint
{

enum class Activation
{
    tanh,
    relu,
};

std::string to_string(Activation a);
Activation activation_from_string(const std::string &s);

struct AdamParams
{
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct MlpConfig
{
    std::vector<int> hidden_layer_widths{64};
    Activation hidden_activation = Activation::tanh;
    int batch_size = 32;
    int max_epochs = 500;
    AdamParams adam;
    int patience = 20;        // epochs without an improvement of min_delta
    double min_delta = 1e-4;  // on the training loss, normalized units
    std::uint64_t rng_seed = 1;
};

void validate(const MlpConfig &config);
// e.g. "mlp_h64x64_tanh"
std::string descriptor(const MlpConfig &config);
nlohmann::json to_json(const MlpConfig &config);
MlpConfig mlp_config_from_json(const nlohmann::json &j);

// y = W x + b with W stored row-major as outputs x inputs.
struct DenseLayer
{
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;
    std::vector<double> bias;
};

struct MlpModel
{
    MlpConfig config;
    std::size_t input_width = 0;
    std::vector<DenseLayer> layers; // hidden layers then the linear 2-wide output
    std::optional<NormalizationStats> normalizer;
    std::vector<double> loss_history;
};

struct TrainReport
{
    int epochs_run = 0;
    double final_loss = 0.0;
    std::vector<double> loss_history;
    bool stopped_early = false;
};

struct MlpGradients
{
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> bias;
};

struct LossAndGradients
{
    double mse = 0.0;
    MlpGradients gradients;
};

// Glorot-uniform weights, zero biases, deterministic in config.rng_seed.
MlpModel init_mlp(const MlpConfig &config, std::size_t input_width);

double glorot_bound(std::size_t fan_in, std::size_t fan_out);

// Raw network output (normalized label space). Throws DataError on width mismatch.
std::array<double, 2> forward(const MlpModel &model, std::span<const double> features);

// Mean over samples and both outputs of the squared error, with backprop gradients.
LossAndGradients loss_and_gradients(const MlpModel &model, const Matrix &inputs, const Matrix &targets);

// Adam over all parameters of one model.
class AdamOptimizer
{
public:
    AdamOptimizer(const MlpModel &model, AdamParams params);
    void step(MlpModel &model, const MlpGradients &gradients);
    long long steps() const noexcept { return t_; }

private:
    AdamParams params_;
    long long t_ = 0;
    MlpGradients m_;
    MlpGradients v_;
};

// Mini-batch Adam on already-normalized data. Early stopping watches the epoch's mean
// training loss; the weights of the last epoch are kept. Throws DivergenceError on a
// non-finite loss.
TrainReport train_normalized(MlpModel &model, const Matrix &inputs, const Matrix &targets);

// Fits the normalizer on `training`, binds it to the model, then trains.
TrainReport train(MlpModel &model, std::span<const FeatureVector> training);

// Metres. Throws ConfigError when no normalizer is bound.
std::array<double, 2> predict(const MlpModel &model, std::span<const double> features);
std::vector<std::array<double, 2>> predict_batch(const MlpModel &model, std::span<const FeatureVector> vectors,
                                                 Execution exec = Execution::parallel);

nlohmann::json to_json(const MlpModel &model);
MlpModel mlp_from_json(const nlohmann::json &j);

} // namespace beamprint
