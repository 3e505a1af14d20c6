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

#include "beamprint/pipeline.hpp"

#include "beamprint/errors.hpp"
#include "beamprint/json_keys.hpp"
#include "beamprint/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>

namespace beamprint
{

std::pair<Dataset, Dataset> split(const Dataset &dataset, double train_fraction, std::uint64_t seed)
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ConfigError("train fraction must lie in (0, 1)");
    const std::size_t n = dataset.records.size();
    if (n < 2)
        throw ConfigError("splitting needs at least two records");
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 1e-9));
    if (n_train == 0 || n_train >= n)
        throw ConfigError("train fraction " + std::to_string(train_fraction) + " leaves one side of the split empty");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));

    std::pair<Dataset, Dataset> out;
    for (Dataset *side : {&out.first, &out.second})
    {
        side->scenario_hash = dataset.scenario_hash;
        side->seed = dataset.seed;
        side->keep_cells = dataset.keep_cells;
        side->keep_beams_per_cell = dataset.keep_beams_per_cell;
    }
    out.first.records.reserve(n_train);
    out.second.records.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i)
        (i < n_train ? out.first : out.second).records.push_back(dataset.records[order[i]]);
    return out;
}

// ---- model specs and trained models ------------------------------------------------

std::string descriptor(const ModelSpec &m)
{
    return m.kind == ModelSpec::Kind::mlp ? descriptor(m.mlp) : descriptor(m.tree);
}

nlohmann::json to_json(const ModelSpec &m)
{
    nlohmann::json j = m.kind == ModelSpec::Kind::mlp ? to_json(m.mlp) : to_json(m.tree);
    j["type"] = m.kind == ModelSpec::Kind::mlp ? "mlp" : "tree";
    return j;
}

ModelSpec model_spec_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        throw ConfigError("model entry must be a JSON object");
    ModelSpec m;
    const std::string type = j.value("type", std::string("mlp"));
    if (type == "mlp")
    {
        m.kind = ModelSpec::Kind::mlp;
        m.mlp = mlp_config_from_json(j);
    }
    else if (type == "tree")
    {
        m.kind = ModelSpec::Kind::tree;
        m.tree = tree_config_from_json(j);
    }
    else
        throw ConfigError("unknown model type '" + type + "' (expected mlp or tree)");
    return m;
}

FitOutcome fit_model(const ModelSpec &spec, const FeatureConfig &features, std::span<const FeatureVector> training)
{
    if (training.empty())
        throw DataError("no training vectors for " + descriptor(spec));
    FitOutcome out;
    out.model.features = features;
    if (spec.kind == ModelSpec::Kind::mlp)
    {
        MlpModel model = init_mlp(spec.mlp, feature_width(features));
        out.training = train(model, training);
        out.model.model = std::move(model);
    }
    else
        out.model.model = fit_tree(training, spec.tree, Execution::serial);
    return out;
}

std::array<double, 2> predict(const TrainedModel &model, std::span<const double> features)
{
    return std::visit([&](const auto &m) { return beamprint::predict(m, features); }, model.model);
}

std::vector<std::array<double, 2>> predict_batch(const TrainedModel &model, std::span<const FeatureVector> vectors)
{
    return std::visit([&](const auto &m) { return beamprint::predict_batch(m, vectors); }, model.model);
}

std::array<double, 2> infer(const TrainedModel &model, const FingerprintRecord &report)
{
    if (model.cell && report.serving_cell_id != *model.cell)
        throw DataError("report is served by cell " + std::to_string(report.serving_cell_id) + " but the model was trained for cell " +
                        std::to_string(*model.cell));
    SkipReason reason = SkipReason::none;
    const auto v = extract(report, model.features, &reason);
    if (!v)
        throw DataError(std::string("report does not fit the feature layout: ") + to_string(reason));
    return predict(model, v->values);
}

nlohmann::json to_json(const TrainedModel &m)
{
    nlohmann::json j{{"format", "beamprint-model"},
                     {"version", 1},
                     {"kind", std::holds_alternative<MlpModel>(m.model) ? "mlp" : "tree"},
                     {"features", to_json(m.features)},
                     {"scenario_hash", hash_hex(m.scenario_hash)},
                     {"train_fraction", m.train_fraction},
                     {"split_seed", m.split_seed}};
    j["cell"] = m.cell ? nlohmann::json(*m.cell) : nlohmann::json(nullptr);
    j["model"] = std::visit([](const auto &x) { return to_json(x); }, m.model);
    return j;
}

TrainedModel trained_model_from_json(const nlohmann::json &j)
{
    try
    {
        if (j.at("format").get<std::string>() != "beamprint-model" || j.at("version").get<int>() != 1)
            throw DataError("not a version 1 beamprint-model file");
        TrainedModel m;
        m.features = feature_config_from_json(j.at("features"));
        m.scenario_hash = std::stoull(j.at("scenario_hash").get<std::string>(), nullptr, 16);
        m.train_fraction = j.at("train_fraction").get<double>();
        m.split_seed = j.at("split_seed").get<std::uint64_t>();
        if (!j.at("cell").is_null())
            m.cell = j.at("cell").get<int>();
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "mlp")
            m.model = mlp_from_json(j.at("model"));
        else if (kind == "tree")
            m.model = tree_from_json(j.at("model"));
        else
            throw DataError("unknown model kind '" + kind + "'");
        const std::size_t width = std::visit([](const auto &x) { return x.input_width; }, m.model);
        if (width != feature_width(m.features))
            throw DataError("model input width does not match its feature layout");
        return m;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw DataError(std::string("malformed model file: ") + e.what());
    }
    catch (const std::invalid_argument &)
    {
        throw DataError("malformed model file: bad scenario_hash");
    }
}

namespace
{

void write_text(const std::filesystem::path &path, const std::string &text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    out << text;
}

nlohmann::json read_json(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw DataError(path.string() + ": " + e.what());
    }
}

} // namespace

void save_model(const TrainedModel &model, const std::filesystem::path &path)
{
    write_text(path, to_json(model).dump() + "\n");
}

TrainedModel load_model(const std::filesystem::path &path)
{
    return trained_model_from_json(read_json(path));
}

// ---- experiment specs ----------------------------------------------------------------

void validate(const ExperimentSpec &spec)
{
    if (spec.features.empty())
        throw ConfigError("experiment needs at least one feature config");
    if (spec.models.empty())
        throw ConfigError("experiment needs at least one model config");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw ConfigError("train fraction must lie in (0, 1)");
    for (const FeatureConfig &f : spec.features)
        validate(for_topology(f, spec.topology));
    if (spec.cells.mode == CellSelection::Mode::list && spec.cells.cells.empty())
        throw ConfigError("cell list is empty");
}

nlohmann::json to_json(const ExperimentSpec &s)
{
    nlohmann::json features = nlohmann::json::array();
    for (const FeatureConfig &f : s.features)
        features.push_back(to_json(f));
    nlohmann::json models = nlohmann::json::array();
    for (const ModelSpec &m : s.models)
        models.push_back(to_json(m));
    nlohmann::json cells;
    switch (s.cells.mode)
    {
    case CellSelection::Mode::all:
        cells = "all";
        break;
    case CellSelection::Mode::largest:
        cells = "largest";
        break;
    case CellSelection::Mode::list:
        cells = s.cells.cells;
        break;
    }
    nlohmann::json j{{"scenario", s.scenario},
                     {"features", features},
                     {"models", models},
                     {"topology", to_string(s.topology)},
                     {"cells", cells},
                     {"train_fraction", s.train_fraction},
                     {"split_seed", s.split_seed},
                     {"output_dir", s.output_dir.string()},
                     {"min_cell_records", s.min_cell_records}};
    if (s.dataset)
        j["dataset"] = s.dataset->string();
    if (s.dataset_seed)
        j["dataset_seed"] = *s.dataset_seed;
    return j;
}

ExperimentSpec experiment_spec_from_json(const nlohmann::json &j, const std::filesystem::path &base_dir)
{
    if (!j.is_object())
        throw ConfigError("experiment spec must be a JSON object");
    reject_unknown_keys(j,
                        {"scenario", "dataset", "dataset_seed", "features", "models", "topology", "cells", "train_fraction",
                         "split_seed", "output_dir", "min_cell_records"},
                        "experiment spec");
    ExperimentSpec s;
    try
    {
        s.scenario = j.value("scenario", nlohmann::json("default"));
        if (s.scenario.is_string() && s.scenario.get<std::string>() != "default")
        {
            std::filesystem::path p = s.scenario.get<std::string>();
            s.scenario = (p.is_relative() && !base_dir.empty() ? base_dir / p : p).string();
        }
        if (j.contains("dataset"))
        {
            std::filesystem::path p = j.at("dataset").get<std::string>();
            s.dataset = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        }
        if (j.contains("dataset_seed"))
            s.dataset_seed = j.at("dataset_seed").get<std::uint64_t>();
        s.topology = topology_from_string(j.value("topology", std::string("network")));
        if (!j.contains("features") || !j.at("features").is_array())
            throw ConfigError("experiment spec needs a 'features' array");
        for (const auto &f : j.at("features"))
        {
            FeatureConfig fc = feature_config_from_json(f);
            s.features.push_back(for_topology(fc, s.topology));
        }
        if (!j.contains("models") || !j.at("models").is_array())
            throw ConfigError("experiment spec needs a 'models' array");
        for (const auto &m : j.at("models"))
            s.models.push_back(model_spec_from_json(m));
        if (j.contains("cells"))
        {
            const auto &c = j.at("cells");
            if (c.is_string() && c.get<std::string>() == "all")
                s.cells.mode = CellSelection::Mode::all;
            else if (c.is_string() && c.get<std::string>() == "largest")
                s.cells.mode = CellSelection::Mode::largest;
            else if (c.is_array())
            {
                s.cells.mode = CellSelection::Mode::list;
                s.cells.cells = c.get<std::vector<int>>();
            }
            else
                throw ConfigError("'cells' must be \"all\", \"largest\" or a list of cell ids");
        }
        s.train_fraction = j.value("train_fraction", s.train_fraction);
        s.split_seed = j.value("split_seed", s.split_seed);
        s.output_dir = j.value("output_dir", std::string("out"));
        if (s.output_dir.is_relative() && !base_dir.empty())
            s.output_dir = base_dir / s.output_dir;
        s.min_cell_records = j.value("min_cell_records", s.min_cell_records);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("malformed experiment spec: ") + e.what());
    }
    validate(s);
    return s;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open experiment spec " + path.string());
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return experiment_spec_from_json(j, path.parent_path());
}

ScenarioConfig resolve_scenario(const nlohmann::json &scenario, const std::filesystem::path &base_dir)
{
    if (scenario.is_object())
        return scenario_config_from_json(scenario);
    if (scenario.is_string())
    {
        const std::string s = scenario.get<std::string>();
        if (s == "default")
            return default_scenario_config();
        std::filesystem::path p = s;
        return load_scenario_config(p.is_relative() && !base_dir.empty() ? base_dir / p : p);
    }
    throw ConfigError("'scenario' must be \"default\", a path or an inline object");
}

PreparedData prepare_data(const ExperimentSpec &spec, const std::filesystem::path &base_dir)
{
    validate(spec);
    Scenario scenario = build_scenario(resolve_scenario(spec.scenario, base_dir));
    Dataset full;
    if (spec.dataset)
        full = load_dataset(*spec.dataset, scenario);
    else
    {
        DatasetOptions options;
        options.seed = spec.dataset_seed;
        full = build_dataset(scenario, options);
    }
    const std::size_t total = full.records.size();
    Dataset los = los_filter(full);
    auto [train, test] = split(los, spec.train_fraction, spec.split_seed);
    return PreparedData{std::move(scenario), std::move(los), std::move(train), std::move(test), total};
}

// ---- running ------------------------------------------------------------------------

namespace
{

struct Job
{
    std::optional<int> cell;
    std::size_t feature_index = 0;
    std::size_t model_index = 0;
};

std::string run_id(Topology topology, std::optional<int> cell, const FeatureConfig &f, const ModelSpec &m)
{
    std::string prefix = topology == Topology::network_level ? "net" : "cell" + std::to_string(cell.value_or(0));
    return prefix + "_" + descriptor(f) + "_" + descriptor(m);
}

std::vector<std::array<double, 2>> labels_of(std::span<const FeatureVector> vs)
{
    std::vector<std::array<double, 2>> out;
    out.reserve(vs.size());
    for (const FeatureVector &v : vs)
        out.push_back(v.label);
    return out;
}

RunResult execute(const ExperimentSpec &spec, const PreparedData &data, const Job &job,
                  std::span<const FingerprintRecord> train_records, std::span<const FingerprintRecord> test_records)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunResult run;
    run.topology = spec.topology;
    run.cell = job.cell;
    run.features = for_topology(spec.features[job.feature_index], spec.topology);
    if (spec.topology == Topology::cell_specific && run.features.include_serving_cell_id)
        throw ConfigError("cell-specific run would include the serving cell id");
    run.model = spec.models[job.model_index];
    run.run_id = run_id(spec.topology, job.cell, run.features, run.model);

    const FeatureSet train_set = extract_all(train_records, run.features);
    const FeatureSet test_set = extract_all(test_records, run.features);
    run.skipped_train = train_set.skipped_serving + train_set.skipped_neighbors;
    run.skipped_test = test_set.skipped_serving + test_set.skipped_neighbors;
    if (train_set.vectors.empty() || test_set.vectors.empty())
        throw DataError(run.run_id + ": no usable records after feature extraction");

    FitOutcome fit = fit_model(run.model, run.features, train_set.vectors);
    fit.model.cell = job.cell;
    fit.model.scenario_hash = data.scenario.hash();
    fit.model.train_fraction = spec.train_fraction;
    fit.model.split_seed = spec.split_seed;
    run.training = std::move(fit.training);
    run.trained = std::move(fit.model);

    const auto train_labels = labels_of(train_set.vectors);
    const auto test_labels = labels_of(test_set.vectors);
    run.train = summarize(euclidean_errors(predict_batch(run.trained, train_set.vectors), train_labels), "train", run.run_id);
    run.test_errors = euclidean_errors(predict_batch(run.trained, test_set.vectors), test_labels);
    run.test = summarize(run.test_errors, "test", run.run_id);
    run.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

} // namespace

ExperimentResult run_experiment(const ExperimentSpec &spec, const PreparedData &data)
{
    validate(spec);
    ExperimentResult result;
    std::vector<Job> jobs;
    std::map<int, Dataset> train_parts;
    std::map<int, Dataset> test_parts;
    std::vector<int> cells;

    if (spec.topology == Topology::network_level)
    {
        for (std::size_t f = 0; f < spec.features.size(); ++f)
            for (std::size_t m = 0; m < spec.models.size(); ++m)
                jobs.push_back(Job{std::nullopt, f, m});
    }
    else
    {
        train_parts = partition_by_cell(data.train);
        test_parts = partition_by_cell(data.test);
        auto size_of = [&](int cell) {
            const auto a = train_parts.find(cell);
            const auto b = test_parts.find(cell);
            return (a == train_parts.end() ? 0 : a->second.records.size()) + (b == test_parts.end() ? 0 : b->second.records.size());
        };
        switch (spec.cells.mode)
        {
        case CellSelection::Mode::all:
            for (const auto &[cell, part] : train_parts)
                cells.push_back(cell);
            break;
        case CellSelection::Mode::largest:
        {
            int best = -1;
            std::size_t best_size = 0;
            for (const auto &[cell, part] : train_parts)
                if (size_of(cell) > best_size)
                {
                    best = cell;
                    best_size = size_of(cell);
                }
            if (best >= 0)
                cells.push_back(best);
            break;
        }
        case CellSelection::Mode::list:
            cells = spec.cells.cells;
            break;
        }
        std::erase_if(cells, [&](int cell) {
            const std::size_t n = size_of(cell);
            if (n >= spec.min_cell_records && test_parts.count(cell) && train_parts.count(cell))
                return false;
            result.warnings.push_back("skipping cell " + std::to_string(cell) + ": " + std::to_string(n) +
                                      " line-of-sight records (minimum " + std::to_string(spec.min_cell_records) + ")");
            return true;
        });
        for (int cell : cells)
            for (std::size_t f = 0; f < spec.features.size(); ++f)
                for (std::size_t m = 0; m < spec.models.size(); ++m)
                    jobs.push_back(Job{cell, f, m});
    }

    // Independent runs may proceed concurrently; each run's training is sequential and
    // results land in fixed slots, so output order does not depend on scheduling.
    result.runs.resize(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());
    const long long n_jobs = static_cast<long long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n_jobs; ++i)
    {
        const Job &job = jobs[static_cast<std::size_t>(i)];
        try
        {
            if (job.cell)
                result.runs[static_cast<std::size_t>(i)] =
                    execute(spec, data, job, train_parts.at(*job.cell).records, test_parts.at(*job.cell).records);
            else
                result.runs[static_cast<std::size_t>(i)] = execute(spec, data, job, data.train.records, data.test.records);
        }
        catch (...)
        {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto &failure : failures)
        if (failure)
            std::rethrow_exception(failure);

    if (spec.topology == Topology::cell_specific && !cells.empty())
        for (std::size_t f = 0; f < spec.features.size(); ++f)
            for (std::size_t m = 0; m < spec.models.size(); ++m)
            {
                std::vector<double> pooled;
                for (std::size_t i = 0; i < jobs.size(); ++i)
                    if (jobs[i].feature_index == f && jobs[i].model_index == m)
                        pooled.insert(pooled.end(), result.runs[i].test_errors.begin(), result.runs[i].test_errors.end());
                const std::string id = "cellall_" + descriptor(for_topology(spec.features[f], spec.topology)) + "_" +
                                       descriptor(spec.models[m]);
                result.pooled.push_back(summarize(pooled, "test", id));
            }

    nlohmann::json manifest_spec = to_json(spec);
    manifest_spec["scenario"] = to_json(data.scenario.config());
    manifest_spec.erase("dataset");
    manifest_spec["dataset_seed"] = data.los.seed;
    nlohmann::json runs = nlohmann::json::array();
    for (const RunResult &r : result.runs)
        runs.push_back({{"run_id", r.run_id},
                        {"report", "reports/" + r.run_id + ".json"},
                        {"cdf", "cdf/" + r.run_id + ".csv"},
                        {"model", "models/" + r.run_id + ".json"},
                        {"duration_s", r.duration_s}});
    result.manifest = nlohmann::json{{"format", "beamprint-manifest"},
                                     {"version", 1},
                                     {"spec", manifest_spec},
                                     {"scenario_hash", hash_hex(data.scenario.hash())},
                                     {"dataset",
                                      {{"content_hash", hash_hex(content_hash(data.los))},
                                       {"seed", data.los.seed},
                                       {"keep_cells", data.los.keep_cells},
                                       {"keep_beams_per_cell", data.los.keep_beams_per_cell},
                                       {"records", data.total_records},
                                       {"los_records", data.los.records.size()},
                                       {"train_records", data.train.records.size()},
                                       {"test_records", data.test.records.size()}}},
                                     {"runs", runs},
                                     {"warnings", result.warnings},
                                     {"threads", hardware_threads()}};
    if (spec.dataset)
        result.manifest["dataset"]["source"] = spec.dataset->string();
    return result;
}

nlohmann::json run_report_json(const RunResult &r)
{
    nlohmann::json j{{"run_id", r.run_id},
                     {"topology", to_string(r.topology)},
                     {"features", to_json(r.features)},
                     {"model", to_json(r.model)},
                     {"skipped_train", r.skipped_train},
                     {"skipped_test", r.skipped_test},
                     {"train", to_json(r.train)},
                     {"test", to_json(r.test)}};
    j["cell"] = r.cell ? nlohmann::json(*r.cell) : nlohmann::json(nullptr);
    if (r.training)
        j["training"] = {{"epochs_run", r.training->epochs_run},
                         {"final_loss", r.training->final_loss},
                         {"stopped_early", r.training->stopped_early},
                         {"loss_history", r.training->loss_history}};
    return j;
}

void write_outputs(const ExperimentSpec &spec, const ExperimentResult &result)
{
    const std::filesystem::path &dir = spec.output_dir;
    std::filesystem::create_directories(dir / "reports");
    std::filesystem::create_directories(dir / "cdf");
    std::filesystem::create_directories(dir / "models");
    std::vector<EvalReport> tests;
    for (const RunResult &r : result.runs)
    {
        write_text(dir / "reports" / (r.run_id + ".json"), run_report_json(r).dump(2) + "\n");
        write_text(dir / "cdf" / (r.run_id + ".csv"), cdf_csv(r.test));
        save_model(r.trained, dir / "models" / (r.run_id + ".json"));
        tests.push_back(r.test);
    }
    for (const EvalReport &p : result.pooled)
    {
        write_text(dir / "reports" / (p.config + ".json"), nlohmann::json{{"pooled", to_json(p)}}.dump(2) + "\n");
        write_text(dir / "cdf" / (p.config + ".csv"), cdf_csv(p));
        tests.push_back(p);
    }
    if (tests.size() >= 2)
    {
        const Comparison cmp = compare(tests);
        write_text(dir / "reports" / "comparison.json", to_json(cmp).dump(2) + "\n");
        write_text(dir / "reports" / "comparison.txt", to_text(cmp));
    }
    write_text(dir / "manifest.json", result.manifest.dump(2) + "\n");
}

ExperimentResult run_experiment(const ExperimentSpec &spec, const std::filesystem::path &base_dir)
{
    const auto t0 = std::chrono::steady_clock::now();
    const PreparedData data = prepare_data(spec, base_dir);
    ExperimentResult result = run_experiment(spec, data);
    result.manifest["total_duration_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs(spec, result);
    return result;
}

ExperimentResult replay_manifest(const std::filesystem::path &manifest, const std::filesystem::path &output_dir)
{
    const nlohmann::json m = read_json(manifest);
    if (m.value("format", "") != "beamprint-manifest")
        throw ConfigError(manifest.string() + " is not a beamprint manifest");
    ExperimentSpec spec = experiment_spec_from_json(m.at("spec"));
    spec.output_dir = output_dir;
    ExperimentResult result = run_experiment(spec);
    if (result.manifest.at("dataset").at("content_hash") != m.at("dataset").at("content_hash"))
        throw DataError("replayed dataset differs from the recorded one");
    return result;
}

} // namespace beamprint
