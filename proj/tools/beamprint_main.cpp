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
#include "beamprint/pipeline.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace bp = beamprint;

namespace
{

// A JSON argument may be given inline (starts with '{') or as a file path.
nlohmann::json json_argument(const std::string &arg, const char *what)
{
    const auto first = arg.find_first_not_of(" \t\r\n");
    try
    {
        if (first != std::string::npos && arg[first] == '{')
            return nlohmann::json::parse(arg);
        std::ifstream in(arg);
        if (!in)
            throw bp::ConfigError(std::string("cannot open ") + what + " " + arg);
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw bp::ConfigError(std::string("malformed ") + what + ": " + e.what());
    }
}

void write_file(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw bp::DataError("cannot write " + path);
    out << text;
}

struct Selection
{
    std::vector<bp::FeatureVector> vectors;
    std::size_t skipped = 0;
};

// Recreates the model's train/test split and returns the requested side, restricted to the
// model's cell when it is cell-specific.
Selection select(const bp::TrainedModel &model, const bp::Dataset &dataset, const std::string &side)
{
    bp::Dataset los = bp::los_filter(dataset);
    bp::Dataset chosen;
    if (side == "all")
        chosen = std::move(los);
    else
    {
        auto [train, test] = bp::split(los, model.train_fraction, model.split_seed);
        chosen = side == "train" ? std::move(train) : std::move(test);
    }
    if (model.cell)
        std::erase_if(chosen.records, [&](const bp::FingerprintRecord &r) { return r.serving_cell_id != *model.cell; });
    if (chosen.records.empty())
        throw bp::DataError("no records to evaluate");
    bp::FeatureSet set = bp::extract_all(chosen.records, model.features);
    return Selection{std::move(set.vectors), set.skipped_serving + set.skipped_neighbors};
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"beamprint: beam-RSRP fingerprint positioning laboratory"};
    app.require_subcommand(1);

    // generate-scenario
    auto *gen = app.add_subcommand("generate-scenario", "Write the default scenario config");
    std::string gen_out;
    std::optional<std::uint64_t> gen_seed;
    std::optional<double> gen_sigma, gen_resolution;
    gen->add_option("--out", gen_out, "Output scenario file")->required();
    gen->add_option("--seed", gen_seed, "Shadowing seed");
    gen->add_option("--shadowing-sigma", gen_sigma, "Log-normal shadowing sigma in dB");
    gen->add_option("--resolution", gen_resolution, "Grid resolution in meters");

    // build-dataset
    auto *build = app.add_subcommand("build-dataset", "Sweep the grid and write a fingerprint dataset");
    std::string build_scenario_path, build_out;
    std::optional<std::uint64_t> build_seed;
    int keep_cells = 8, keep_beams = 4;
    build->add_option("--scenario", build_scenario_path, "Scenario file, or 'default'")->required();
    build->add_option("--out", build_out, "Output dataset (JSON lines)")->required();
    build->add_option("--seed", build_seed, "Shadowing seed (scenario seed when omitted)");
    build->add_option("--keep-cells", keep_cells, "Strongest cells kept per record, 0 keeps all")->capture_default_str();
    build->add_option("--keep-beams", keep_beams, "Strongest beams kept per cell, 0 keeps all")->capture_default_str();

    // train
    auto *tr = app.add_subcommand("train", "Train one model on the train side of a split");
    std::string tr_kind = "mlp", tr_dataset, tr_features, tr_config, tr_out, tr_topology = "network", tr_scenario;
    std::optional<int> tr_cell;
    double tr_fraction = 0.9;
    std::uint64_t tr_split_seed = 1;
    tr->add_option("--model", tr_kind, "mlp or tree")->check(CLI::IsMember({"mlp", "tree"}))->capture_default_str();
    tr->add_option("--dataset", tr_dataset, "Dataset file")->required();
    tr->add_option("--features", tr_features, "Feature config (file or inline JSON)")->required();
    tr->add_option("--config", tr_config, "Model config (file or inline JSON)");
    tr->add_option("--out", tr_out, "Output model file")->required();
    tr->add_option("--topology", tr_topology, "network or cell")->check(CLI::IsMember({"network", "cell"}))->capture_default_str();
    tr->add_option("--cell", tr_cell, "Serving cell for cell-specific training");
    tr->add_option("--train-fraction", tr_fraction)->capture_default_str();
    tr->add_option("--split-seed", tr_split_seed)->capture_default_str();
    tr->add_option("--scenario", tr_scenario, "Scenario to check the dataset against");

    // evaluate
    auto *ev = app.add_subcommand("evaluate", "Evaluate a model on a dataset");
    std::string ev_model, ev_dataset, ev_out, ev_cdf, ev_side = "test";
    ev->add_option("--model", ev_model, "Model file")->required();
    ev->add_option("--dataset", ev_dataset, "Dataset file")->required();
    ev->add_option("--split", ev_side, "test, train or all")->check(CLI::IsMember({"test", "train", "all"}))->capture_default_str();
    ev->add_option("--out", ev_out, "Report JSON (stdout when omitted)");
    ev->add_option("--cdf", ev_cdf, "CDF CSV output");

    // sweep
    auto *sw = app.add_subcommand("sweep", "Run an experiment spec, or replay a manifest");
    std::string sw_spec, sw_replay, sw_out;
    auto *sw_spec_opt = sw->add_option("--spec", sw_spec, "Experiment spec file");
    auto *sw_replay_opt = sw->add_option("--replay", sw_replay, "Manifest to replay");
    sw->add_option("--out", sw_out, "Output directory (overrides the spec)");
    sw_spec_opt->excludes(sw_replay_opt);

    // infer
    auto *inf = app.add_subcommand("infer", "Predict positions for measurement reports");
    std::string inf_model, inf_input = "-";
    inf->add_option("--model", inf_model, "Model file")->required();
    inf->add_option("--input", inf_input, "JSON-lines reports, '-' for stdin")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        if (*gen)
        {
            bp::ScenarioConfig config = bp::default_scenario_config();
            if (gen_seed)
                config.rng_seed = *gen_seed;
            if (gen_sigma)
                config.shadowing_sigma_db = *gen_sigma;
            if (gen_resolution)
                config.grid_resolution_m = *gen_resolution;
            const bp::Scenario scenario = bp::build_scenario(config);
            bp::save_scenario_config(scenario.config(), gen_out);
            std::cout << nlohmann::json{{"scenario", gen_out}, {"hash", bp::hash_hex(scenario.hash())}, {"cells", scenario.cells().size()}}
                      << "\n";
        }
        else if (*build)
        {
            const bp::Scenario scenario = bp::build_scenario(bp::resolve_scenario(build_scenario_path));
            if (keep_cells < 0 || keep_beams < 0)
                throw bp::ConfigError("--keep-cells and --keep-beams must be non-negative");
            bp::DatasetOptions options;
            options.seed = build_seed;
            options.keep_cells = static_cast<std::size_t>(keep_cells);
            options.keep_beams_per_cell = static_cast<std::size_t>(keep_beams);
            const bp::Dataset ds = bp::build_dataset(scenario, options);
            bp::save_dataset(ds, build_out);
            std::size_t los = 0;
            for (const auto &r : ds.records)
                los += r.los_to_serving ? 1 : 0;
            std::cout << nlohmann::json{{"dataset", build_out},
                                        {"records", ds.records.size()},
                                        {"los_records", los},
                                        {"content_hash", bp::hash_hex(bp::content_hash(ds))}}
                      << "\n";
        }
        else if (*tr)
        {
            const bp::Topology topology = bp::topology_from_string(tr_topology);
            if (topology == bp::Topology::cell_specific && !tr_cell)
                throw bp::ConfigError("cell-specific training needs --cell");
            if (topology == bp::Topology::network_level && tr_cell)
                throw bp::ConfigError("--cell only applies to cell-specific training");
            const bp::FeatureConfig features =
                bp::for_topology(bp::feature_config_from_json(json_argument(tr_features, "feature config")), topology);
            bp::validate(features);
            nlohmann::json model_json = tr_config.empty() ? nlohmann::json::object() : json_argument(tr_config, "model config");
            model_json["type"] = tr_kind;
            const bp::ModelSpec spec = bp::model_spec_from_json(model_json);

            bp::Dataset ds = tr_scenario.empty() ? bp::load_dataset(tr_dataset)
                                                 : bp::load_dataset(tr_dataset, bp::build_scenario(bp::resolve_scenario(tr_scenario)));
            auto [train, test] = bp::split(bp::los_filter(ds), tr_fraction, tr_split_seed);
            if (tr_cell)
                std::erase_if(train.records, [&](const bp::FingerprintRecord &r) { return r.serving_cell_id != *tr_cell; });
            const bp::FeatureSet set = bp::extract_all(train.records, features);
            bp::FitOutcome fit = bp::fit_model(spec, features, set.vectors);
            fit.model.cell = tr_cell;
            fit.model.scenario_hash = ds.scenario_hash;
            fit.model.train_fraction = tr_fraction;
            fit.model.split_seed = tr_split_seed;
            bp::save_model(fit.model, tr_out);

            std::vector<std::array<double, 2>> labels;
            for (const auto &v : set.vectors)
                labels.push_back(v.label);
            const auto report = bp::summarize(bp::euclidean_errors(bp::predict_batch(fit.model, set.vectors), labels), "train",
                                              bp::descriptor(features) + "_" + bp::descriptor(spec));
            nlohmann::json out{{"model", tr_out}, {"train", bp::to_json(report)}};
            if (fit.training)
                out["epochs_run"] = fit.training->epochs_run;
            std::cout << out.dump() << "\n";
        }
        else if (*ev)
        {
            const bp::TrainedModel model = bp::load_model(ev_model);
            const bp::Dataset ds = bp::load_dataset(ev_dataset);
            if (ds.scenario_hash != model.scenario_hash)
                throw bp::DataError("dataset scenario " + bp::hash_hex(ds.scenario_hash) + " does not match the model's " +
                                    bp::hash_hex(model.scenario_hash));
            const Selection sel = select(model, ds, ev_side);
            std::vector<std::array<double, 2>> labels;
            for (const auto &v : sel.vectors)
                labels.push_back(v.label);
            const auto errors = bp::euclidean_errors(bp::predict_batch(model, sel.vectors), labels);
            const bp::EvalReport report = bp::summarize(errors, ev_side, ev_model);
            const std::string text = bp::to_json(report).dump(2) + "\n";
            if (ev_out.empty())
                std::cout << text;
            else
                write_file(ev_out, text);
            if (!ev_cdf.empty())
                write_file(ev_cdf, bp::cdf_csv(report));
        }
        else if (*sw)
        {
            bp::ExperimentResult result;
            if (!sw_replay.empty())
            {
                if (sw_out.empty())
                    throw bp::ConfigError("--replay needs --out");
                result = bp::replay_manifest(sw_replay, sw_out);
            }
            else
            {
                if (sw_spec.empty())
                    throw bp::ConfigError("sweep needs --spec or --replay");
                bp::ExperimentSpec spec = bp::load_experiment_spec(sw_spec);
                if (!sw_out.empty())
                    spec.output_dir = sw_out;
                result = bp::run_experiment(spec, std::filesystem::path(sw_spec).parent_path());
            }
            for (const auto &w : result.warnings)
                std::cerr << "warning: " << w << "\n";
            for (const auto &r : result.runs)
                std::cout << r.run_id << "  mean " << r.test.mean_error_m << " m  std " << r.test.std_error_m << " m  n " << r.test.n_samples << "\n";
            for (const auto &p : result.pooled)
                std::cout << p.config << "  mean " << p.mean_error_m << " m  std " << p.std_error_m << " m  n " << p.n_samples << "\n";
        }
        else if (*inf)
        {
            const bp::TrainedModel model = bp::load_model(inf_model);
            std::ifstream file;
            if (inf_input != "-")
            {
                file.open(inf_input);
                if (!file)
                    throw bp::DataError("cannot open " + inf_input);
            }
            std::istream &in = inf_input == "-" ? std::cin : file;
            std::string line;
            std::size_t line_no = 0;
            int status = 0;
            while (std::getline(in, line))
            {
                ++line_no;
                if (line.find_first_not_of(" \t\r") == std::string::npos)
                    continue;
                try
                {
                    const bp::FingerprintRecord r = bp::record_from_json(nlohmann::json::parse(line));
                    const auto xy = bp::infer(model, r);
                    std::cout << nlohmann::json{{"line", line_no}, {"x", xy[0]}, {"y", xy[1]}}.dump() << "\n";
                }
                catch (const std::exception &e)
                {
                    std::cout << nlohmann::json{{"line", line_no}, {"error", e.what()}}.dump() << "\n";
                    status = 2;
                }
            }
            return status;
        }
    }
    catch (const bp::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    catch (const bp::DataError &e)
    {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    }
    catch (const bp::DivergenceError &e)
    {
        std::cerr << "training diverged: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
