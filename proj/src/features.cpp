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

#include "beamprint/features.hpp"

#include "beamprint/errors.hpp"
#include "beamprint/json_keys.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace beamprint
{

std::string to_string(Topology t)
{
    return t == Topology::network_level ? "network" : "cell";
}

Topology topology_from_string(const std::string &s)
{
    if (s == "network" || s == "network-level" || s == "network_level")
        return Topology::network_level;
    if (s == "cell" || s == "cell-specific" || s == "cell_specific")
        return Topology::cell_specific;
    throw ConfigError("unknown topology '" + s + "' (expected network or cell)");
}

void validate(const FeatureConfig &c)
{
    if (c.n_serving_beams < 1)
        throw ConfigError("feature config needs at least one serving beam");
    if (c.n_neighbor_beams < 0)
        throw ConfigError("neighbour beam count must be non-negative");
    if (c.topology == Topology::cell_specific && c.include_serving_cell_id)
        throw ConfigError("cell-specific features must not include the serving cell id");
    if (c.one_hot_ids && (c.max_cell_id < 0 || c.max_beam_id < 0))
        throw ConfigError("one-hot encoding needs non-negative id ranges");
}

FeatureConfig for_topology(FeatureConfig config, Topology topology)
{
    config.topology = topology;
    if (topology == Topology::cell_specific)
        config.include_serving_cell_id = false;
    return config;
}

namespace
{

std::size_t cell_id_width(const FeatureConfig &c)
{
    return c.one_hot_ids ? static_cast<std::size_t>(c.max_cell_id) + 1 : 1;
}

std::size_t beam_id_width(const FeatureConfig &c)
{
    return c.one_hot_ids ? static_cast<std::size_t>(c.max_beam_id) + 1 : 1;
}

} // namespace

std::size_t feature_width(const FeatureConfig &c)
{
    const auto serving = static_cast<std::size_t>(c.n_serving_beams);
    const auto neighbors = static_cast<std::size_t>(c.n_neighbor_beams);
    return serving * (beam_id_width(c) + 1) + (c.include_serving_cell_id ? cell_id_width(c) : 0) +
           neighbors * (cell_id_width(c) + beam_id_width(c) + 1);
}

std::string descriptor(const FeatureConfig &c)
{
    std::string d = "s" + std::to_string(c.n_serving_beams) + "n" + std::to_string(c.n_neighbor_beams);
    if (c.include_serving_cell_id)
        d += "c";
    if (c.one_hot_ids)
        d += "h";
    return d;
}

nlohmann::json to_json(const FeatureConfig &c)
{
    return nlohmann::json{{"serving_beams", c.n_serving_beams}, {"neighbor_beams", c.n_neighbor_beams},
                          {"cell_id_feature", c.include_serving_cell_id}, {"topology", to_string(c.topology)},
                          {"one_hot_ids", c.one_hot_ids}, {"max_cell_id", c.max_cell_id},
                          {"max_beam_id", c.max_beam_id}};
}

FeatureConfig feature_config_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        throw ConfigError("feature config must be a JSON object");
    reject_unknown_keys(j, {"serving_beams", "neighbor_beams", "cell_id_feature", "topology", "one_hot_ids", "max_cell_id", "max_beam_id"},
                        "feature config");
    FeatureConfig c;
    try
    {
        c.n_serving_beams = j.value("serving_beams", c.n_serving_beams);
        c.n_neighbor_beams = j.value("neighbor_beams", c.n_neighbor_beams);
        c.include_serving_cell_id = j.value("cell_id_feature", c.include_serving_cell_id);
        c.topology = topology_from_string(j.value("topology", std::string("network")));
        c.one_hot_ids = j.value("one_hot_ids", false);
        c.max_cell_id = j.value("max_cell_id", 0);
        c.max_beam_id = j.value("max_beam_id", 0);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("malformed feature config: ") + e.what());
    }
    validate(c);
    return c;
}

const char *to_string(SkipReason reason)
{
    switch (reason)
    {
    case SkipReason::none:
        return "none";
    case SkipReason::too_few_serving_beams:
        return "too few serving-cell beams";
    case SkipReason::too_few_neighbor_cells:
        return "too few neighbour cells";
    }
    return "unknown";
}

namespace
{

void push_id(std::vector<double> &out, int id, int max_id, bool one_hot)
{
    if (!one_hot)
    {
        out.push_back(static_cast<double>(id));
        return;
    }
    const std::size_t base = out.size();
    out.resize(base + static_cast<std::size_t>(max_id) + 1, 0.0);
    if (id >= 0 && id <= max_id)
        out[base + static_cast<std::size_t>(id)] = 1.0;
}

} // namespace

std::optional<FeatureVector> extract(const FingerprintRecord &record, const FeatureConfig &config, SkipReason *reason)
{
    auto skip = [&](SkipReason r) -> std::optional<FeatureVector> {
        if (reason)
            *reason = r;
        return std::nullopt;
    };

    const auto serving_needed = static_cast<std::size_t>(config.n_serving_beams);
    const auto neighbors_needed = static_cast<std::size_t>(config.n_neighbor_beams);
    std::vector<const Measurement *> serving;
    std::vector<const Measurement *> neighbors;
    serving.reserve(serving_needed);
    neighbors.reserve(neighbors_needed);
    for (const Measurement &m : record.measurements)
    {
        if (m.cell_id == record.serving_cell_id)
        {
            if (serving.size() < serving_needed)
                serving.push_back(&m);
        }
        else if (neighbors.size() < neighbors_needed &&
                 std::none_of(neighbors.begin(), neighbors.end(), [&](const Measurement *n) { return n->cell_id == m.cell_id; }))
            neighbors.push_back(&m);
        if (serving.size() == serving_needed && neighbors.size() == neighbors_needed)
            break;
    }
    if (serving.size() < serving_needed)
        return skip(SkipReason::too_few_serving_beams);
    if (neighbors.size() < neighbors_needed)
        return skip(SkipReason::too_few_neighbor_cells);

    FeatureVector v;
    v.values.reserve(feature_width(config));
    for (const Measurement *m : serving)
    {
        push_id(v.values, m->beam_id, config.max_beam_id, config.one_hot_ids);
        v.values.push_back(m->rsrp_dbm);
    }
    if (config.include_serving_cell_id)
        push_id(v.values, record.serving_cell_id, config.max_cell_id, config.one_hot_ids);
    for (const Measurement *m : neighbors)
    {
        push_id(v.values, m->cell_id, config.max_cell_id, config.one_hot_ids);
        push_id(v.values, m->beam_id, config.max_beam_id, config.one_hot_ids);
        v.values.push_back(m->rsrp_dbm);
    }
    v.label = {record.x, record.y};
    if (reason)
        *reason = SkipReason::none;
    return v;
}

FeatureSet extract_all(std::span<const FingerprintRecord> records, const FeatureConfig &config)
{
    validate(config);
    FeatureSet set;
    set.vectors.reserve(records.size());
    set.source_index.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        SkipReason reason = SkipReason::none;
        auto v = extract(records[i], config, &reason);
        if (v)
        {
            set.vectors.push_back(std::move(*v));
            set.source_index.push_back(i);
        }
        else if (reason == SkipReason::too_few_serving_beams)
            ++set.skipped_serving;
        else
            ++set.skipped_neighbors;
    }
    return set;
}

namespace
{

// Two-pass population statistics; degenerate spread maps to 1.
std::pair<double, double> mean_std(std::span<const FeatureVector> vs, auto &&get)
{
    const double n = static_cast<double>(vs.size());
    double sum = 0.0;
    for (const FeatureVector &v : vs)
        sum += get(v);
    const double mean = sum / n;
    double ss = 0.0;
    for (const FeatureVector &v : vs)
    {
        const double d = get(v) - mean;
        ss += d * d;
    }
    double sd = std::sqrt(ss / n);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean))))
        sd = 1.0;
    return {mean, sd};
}

} // namespace

NormalizationStats fit_normalizer(std::span<const FeatureVector> training)
{
    if (training.empty())
        throw DataError("cannot fit a normalizer on an empty training set");
    const std::size_t width = training.front().values.size();
    for (const FeatureVector &v : training)
        if (v.values.size() != width)
            throw DataError("training vectors have inconsistent widths");

    NormalizationStats stats;
    stats.mean.resize(width);
    stats.std.resize(width);
    for (std::size_t f = 0; f < width; ++f)
        std::tie(stats.mean[f], stats.std[f]) = mean_std(training, [f](const FeatureVector &v) { return v.values[f]; });
    for (std::size_t k = 0; k < 2; ++k)
        std::tie(stats.label_mean[k], stats.label_std[k]) = mean_std(training, [k](const FeatureVector &v) { return v.label[k]; });
    return stats;
}

void apply_in_place(const NormalizationStats &stats, std::span<double> values)
{
    if (values.size() != stats.width())
        throw DataError("feature width " + std::to_string(values.size()) + " does not match normalizer width " +
                        std::to_string(stats.width()));
    for (std::size_t f = 0; f < values.size(); ++f)
        values[f] = (values[f] - stats.mean[f]) / stats.std[f];
}

std::vector<double> apply(const NormalizationStats &stats, std::span<const double> values)
{
    std::vector<double> out(values.begin(), values.end());
    apply_in_place(stats, out);
    return out;
}

std::array<double, 2> normalize_label(const NormalizationStats &stats, std::array<double, 2> label)
{
    return {(label[0] - stats.label_mean[0]) / stats.label_std[0], (label[1] - stats.label_mean[1]) / stats.label_std[1]};
}

std::array<double, 2> invert_labels(const NormalizationStats &stats, std::array<double, 2> z)
{
    return {z[0] * stats.label_std[0] + stats.label_mean[0], z[1] * stats.label_std[1] + stats.label_mean[1]};
}

nlohmann::json to_json(const NormalizationStats &s)
{
    return nlohmann::json{{"mean", s.mean}, {"std", s.std}, {"label_mean", s.label_mean}, {"label_std", s.label_std}};
}

NormalizationStats normalizer_from_json(const nlohmann::json &j)
{
    try
    {
        NormalizationStats s;
        s.mean = j.at("mean").get<std::vector<double>>();
        s.std = j.at("std").get<std::vector<double>>();
        s.label_mean = j.at("label_mean").get<std::array<double, 2>>();
        s.label_std = j.at("label_std").get<std::array<double, 2>>();
        if (s.mean.size() != s.std.size())
            throw DataError("normalizer mean/std widths differ");
        return s;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw DataError(std::string("malformed normalizer: ") + e.what());
    }
}

} // namespace beamprint
