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

#include "beamprint/dtree.hpp"
#include "beamprint/eval.hpp"
#include "beamprint/features.hpp"
#include "beamprint/fingerprint.hpp"
#include "beamprint/mlp.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace beamprint
{

// Seeded Fisher-Yates shuffle then prefix split; the train side gets
// floor(fraction * n) records. Throws ConfigError if either side would be empty.
std::pair<Dataset, Dataset> split(const Dataset &dataset, double train_fraction, std::uint64_t seed);

struct ModelSpec
{
    enum class Kind
    {
        mlp,
        tree,
    };
    Kind kind = Kind::mlp;
    MlpConfig mlp;
    TreeConfig tree;
};

std::string descriptor(const ModelSpec &model);
nlohmann::json to_json(const ModelSpec &model);
ModelSpec model_spec_from_json(const nlohmann::json &j);

// Trained regressor plus everything needed to apply it to a measurement report.
struct TrainedModel
{
    std::variant<MlpModel, TreeModel> model;
    FeatureConfig features;
    std::optional<int> cell; // set for cell-specific models
    std::uint64_t scenario_hash = 0;
    double train_fraction = 0.9;
    std::uint64_t split_seed = 1;
};

struct FitOutcome
{
    TrainedModel model;
    std::optional<TrainReport> training; // MLP only
};

FitOutcome fit_model(const ModelSpec &spec, const FeatureConfig &features, std::span<const FeatureVector> training);

std::array<double, 2> predict(const TrainedModel &model, std::span<const double> features);
std::vector<std::array<double, 2>> predict_batch(const TrainedModel &model, std::span<const FeatureVector> vectors);

// Extracts features from a measurement report and predicts. Throws DataError when the
// report lacks what the feature layout needs or belongs to another cell.
std::array<double, 2> infer(const TrainedModel &model, const FingerprintRecord &report);

nlohmann::json to_json(const TrainedModel &model);
TrainedModel trained_model_from_json(const nlohmann::json &j);
void save_model(const TrainedModel &model, const std::filesystem::path &path);
TrainedModel load_model(const std::filesystem::path &path);

struct CellSelection
{
    enum class Mode
    {
        all,
        largest,
        list,
    };
    Mode mode = Mode::all;
    std::vector<int> cells;
};

struct ExperimentSpec
{
    nlohmann::json scenario = "default"; // "default", a file path, or an inline config object
    std::optional<std::filesystem::path> dataset; // prebuilt dataset; built from the scenario otherwise
    std::optional<std::uint64_t> dataset_seed;
    std::vector<FeatureConfig> features;
    std::vector<ModelSpec> models;
    Topology topology = Topology::network_level;
    CellSelection cells;
    double train_fraction = 0.9;
    std::uint64_t split_seed = 1;
    std::filesystem::path output_dir = "out";
    std::size_t min_cell_records = 50;
};

void validate(const ExperimentSpec &spec);
nlohmann::json to_json(const ExperimentSpec &spec);
// Relative scenario/dataset paths resolve against base_dir.
ExperimentSpec experiment_spec_from_json(const nlohmann::json &j, const std::filesystem::path &base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path &path);

ScenarioConfig resolve_scenario(const nlohmann::json &scenario, const std::filesystem::path &base_dir = {});

struct RunResult
{
    std::string run_id;
    Topology topology = Topology::network_level;
    std::optional<int> cell;
    FeatureConfig features;
    ModelSpec model;
    EvalReport train;
    EvalReport test;
    std::optional<TrainReport> training;
    TrainedModel trained;
    std::vector<double> test_errors;
    std::size_t skipped_train = 0;
    std::size_t skipped_test = 0;
    double duration_s = 0.0;
};

struct ExperimentResult
{
    std::vector<RunResult> runs;
    std::vector<EvalReport> pooled; // cell-specific: test errors pooled over cells per config
    std::vector<std::string> warnings;
    nlohmann::json manifest;
};

// Everything the runner needs once the data is in memory; the acceptance suite drives
// it directly to reuse one dataset across experiments.
struct PreparedData
{
    Scenario scenario;
    Dataset los;
    Dataset train;
    Dataset test;
    std::size_t total_records = 0;
};

PreparedData prepare_data(const ExperimentSpec &spec, const std::filesystem::path &base_dir = {});

// Runs every (feature x model [x cell]) combination. Writes nothing.
ExperimentResult run_experiment(const ExperimentSpec &spec, const PreparedData &data);

// Full sweep: prepare, run, and write reports/, cdf/, models/, manifest.json under
// spec.output_dir.
ExperimentResult run_experiment(const ExperimentSpec &spec, const std::filesystem::path &base_dir = {});
void write_outputs(const ExperimentSpec &spec, const ExperimentResult &result);

// Report JSON for one run as written to reports/<run_id>.json.
nlohmann::json run_report_json(const RunResult &run);

// Re-runs the experiment recorded in a manifest into output_dir.
ExperimentResult replay_manifest(const std::filesystem::path &manifest, const std::filesystem::path &output_dir);

} // namespace beamprint
