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
#include "beamprint/parallel.hpp"

#include "json.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace beamprint
{

struct TreeConfig
{
    int max_depth = 30;
    int min_samples_leaf = 2;
    // Minimum drop in summed squared error per training sample for a split to be kept.
    double min_impurity_decrease = 0.0;
};

void validate(const TreeConfig &config);
std::string descriptor(const TreeConfig &config);
nlohmann::json to_json(const TreeConfig &config);
TreeConfig tree_config_from_json(const nlohmann::json &j);

// Flat node; children are indices into TreeModel::nodes. feature < 0 marks a leaf.
struct TreeNode
{
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::array<double, 2> value{0.0, 0.0}; // mean label of the samples reaching the node
    int sample_count = 0;
    double impurity = 0.0; // sum over samples of squared distance to `value`
    int depth = 0;

    bool is_leaf() const noexcept { return feature < 0; }
};

struct TreeModel
{
    TreeConfig config;
    std::size_t input_width = 0;
    std::vector<TreeNode> nodes; // nodes[0] is the root, pre-order

    int depth() const noexcept;
    std::size_t leaf_count() const noexcept;
};

struct SplitChoice
{
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0; // summed child impurity
    std::size_t left_count = 0;
};

// Best (feature, threshold) for the given samples under the leaf-size limit; feature -1
// when no admissible split exists. Candidate thresholds are midpoints between
// consecutive distinct values; ties go to the lower feature, then the lower threshold.
SplitChoice best_split(std::span<const FeatureVector> samples, int min_samples_leaf,
                       Execution exec = Execution::serial);

// Greedy top-down multi-output CART on raw labels. Deterministic. Throws DataError on
// empty input or inconsistent widths.
TreeModel fit_tree(std::span<const FeatureVector> samples, const TreeConfig &config,
                   Execution exec = Execution::parallel);

// Leaf value reached by the sample. Throws DataError on width mismatch.
std::array<double, 2> predict(const TreeModel &tree, std::span<const double> features);
// Index of the leaf reached.
int leaf_index(const TreeModel &tree, std::span<const double> features);
std::vector<std::array<double, 2>> predict_batch(const TreeModel &tree, std::span<const FeatureVector> vectors,
                                                 Execution exec = Execution::parallel);

nlohmann::json to_json(const TreeModel &tree);
TreeModel tree_from_json(const nlohmann::json &j);

} // namespace beamprint
