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

#include "beamprint/fingerprint.hpp"

#include "json.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace beamprint
{

enum class Topology
{
    network_level,
    cell_specific,
};

std::string to_string(Topology t);
Topology topology_from_string(const std::string &s);

struct FeatureConfig
{
    int n_serving_beams = 3;
    int n_neighbor_beams = 0; // strongest beam of each of the N strongest other cells
    bool include_serving_cell_id = true;
    Topology topology = Topology::network_level;
    // One-hot ID encoding; id spaces are [0, max_cell_id] and [0, max_beam_id].
    bool one_hot_ids = false;
    int max_cell_id = 0;
    int max_beam_id = 0;

    friend bool operator==(const FeatureConfig &, const FeatureConfig &) = default;
};

// Throws ConfigError on violated invariants (including cell-specific with cell id).
void validate(const FeatureConfig &config);

// Same config with the serving cell id dropped and topology set, as cell-specific
// training requires.
FeatureConfig for_topology(FeatureConfig config, Topology topology);

std::size_t feature_width(const FeatureConfig &config);

// Short stable tag, e.g. "s3n2c" (3 serving beams, 2 neighbours, cell id feature).
std::string descriptor(const FeatureConfig &config);

nlohmann::json to_json(const FeatureConfig &config);
FeatureConfig feature_config_from_json(const nlohmann::json &j);

struct FeatureVector
{
    std::vector<double> values;
    std::array<double, 2> label{0.0, 0.0}; // (x, y) metres
};

enum class SkipReason
{
    none,
    too_few_serving_beams,
    too_few_neighbor_cells,
};

const char *to_string(SkipReason reason);

// Layout: [serving beam_id, rsrp] x K, [serving cell_id], then (cell_id, beam_id, rsrp)
// per neighbour cell by descending strength. Empty optional when the record lacks the
// beams or cells the layout needs; `reason` says which.
std::optional<FeatureVector> extract(const FingerprintRecord &record, const FeatureConfig &config,
                                     SkipReason *reason = nullptr);

struct FeatureSet
{
    std::vector<FeatureVector> vectors;
    std::vector<std::size_t> source_index; // index of the originating record
    std::size_t skipped_serving = 0;
    std::size_t skipped_neighbors = 0;
};

FeatureSet extract_all(std::span<const FingerprintRecord> records, const FeatureConfig &config);

struct NormalizationStats
{
    std::vector<double> mean;
    std::vector<double> std;
    std::array<double, 2> label_mean{0.0, 0.0};
    std::array<double, 2> label_std{1.0, 1.0};

    std::size_t width() const noexcept { return mean.size(); }
};

// Population mean / std per feature and per label coordinate. Constant columns get
// std 1. Throws DataError on empty input.
NormalizationStats fit_normalizer(std::span<const FeatureVector> training);

std::vector<double> apply(const NormalizationStats &stats, std::span<const double> values);
void apply_in_place(const NormalizationStats &stats, std::span<double> values);
std::array<double, 2> normalize_label(const NormalizationStats &stats, std::array<double, 2> label);
std::array<double, 2> invert_labels(const NormalizationStats &stats, std::array<double, 2> normalized);

nlohmann::json to_json(const NormalizationStats &stats);
NormalizationStats normalizer_from_json(const nlohmann::json &j);

} // namespace beamprint
