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

#include "beamprint/dtree.hpp"

#include "beamprint/errors.hpp"
#include "beamprint/json_keys.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace beamprint
{

void validate(const TreeConfig &c)
{
    if (c.max_depth < 1)
        throw ConfigError("tree max_depth must be at least 1");
    if (c.min_samples_leaf < 1)
        throw ConfigError("tree min_samples_leaf must be at least 1");
    if (!(c.min_impurity_decrease >= 0.0))
        throw ConfigError("tree min_impurity_decrease must be non-negative");
}

std::string descriptor(const TreeConfig &c)
{
    return "tree_d" + std::to_string(c.max_depth) + "_l" + std::to_string(c.min_samples_leaf);
}

nlohmann::json to_json(const TreeConfig &c)
{
    return nlohmann::json{{"max_depth", c.max_depth}, {"min_samples_leaf", c.min_samples_leaf},
                          {"min_impurity_decrease", c.min_impurity_decrease}};
}

TreeConfig tree_config_from_json(const nlohmann::json &j)
{
    reject_unknown_keys(j, {"type", "max_depth", "min_samples_leaf", "min_impurity_decrease"}, "tree config");
    TreeConfig c;
    try
    {
        c.max_depth = j.value("max_depth", c.max_depth);
        c.min_samples_leaf = j.value("min_samples_leaf", c.min_samples_leaf);
        c.min_impurity_decrease = j.value("min_impurity_decrease", c.min_impurity_decrease);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("malformed tree config: ") + e.what());
    }
    validate(c);
    return c;
}

int TreeModel::depth() const noexcept
{
    int d = 0;
    for (const TreeNode &n : nodes)
        d = std::max(d, n.depth);
    return d;
}

std::size_t TreeModel::leaf_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode &n) { return n.is_leaf(); }));
}

namespace
{

// Running mean / sum of squared deviations over both label coordinates.
struct Welford
{
    double n = 0.0;
    double mean[2] = {0.0, 0.0};
    double m2[2] = {0.0, 0.0};

    void add(const std::array<double, 2> &y)
    {
        n += 1.0;
        for (int k = 0; k < 2; ++k)
        {
            const double d = y[k] - mean[k];
            mean[k] += d / n;
            m2[k] += d * (y[k] - mean[k]);
        }
    }
    double sse() const { return m2[0] + m2[1]; }
};

struct Keyed
{
    double value;
    std::size_t index;
};

// Best threshold along one feature over the samples listed in `idx`.
SplitChoice best_split_on(std::span<const FeatureVector> samples, std::span<const std::size_t> idx, int feature,
                          std::size_t min_leaf, std::vector<Keyed> &keyed, std::vector<double> &right_sse)
{
    const std::size_t n = idx.size();
    keyed.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        keyed[i] = Keyed{samples[idx[i]].values[static_cast<std::size_t>(feature)], idx[i]};
    std::sort(keyed.begin(), keyed.end(), [](const Keyed &a, const Keyed &b) {
        return a.value < b.value || (a.value == b.value && a.index < b.index);
    });

    right_sse.resize(n + 1);
    right_sse[n] = 0.0;
    Welford right;
    for (std::size_t i = n; i-- > 0;)
    {
        right.add(samples[keyed[i].index].label);
        right_sse[i] = right.sse();
    }

    SplitChoice best;
    best.impurity = std::numeric_limits<double>::infinity();
    Welford left;
    for (std::size_t i = 0; i + 1 < n; ++i)
    {
        left.add(samples[keyed[i].index].label);
        const std::size_t n_left = i + 1;
        if (n_left < min_leaf)
            continue;
        if (n - n_left < min_leaf)
            break;
        const double a = keyed[i].value;
        const double b = keyed[i + 1].value;
        if (!(a < b))
            continue;
        const double impurity = left.sse() + right_sse[i + 1];
        if (impurity < best.impurity)
        {
            double threshold = a + 0.5 * (b - a);
            if (!(threshold < b))
                threshold = a;
            best = SplitChoice{feature, threshold, impurity, n_left};
        }
    }
    return best;
}

SplitChoice best_split_indexed(std::span<const FeatureVector> samples, std::span<const std::size_t> idx,
                               std::size_t min_leaf, Execution exec)
{
    const std::size_t width = samples[idx.front()].values.size();
    std::vector<SplitChoice> per_feature(width);
    auto search = [&](std::size_t f) {
        std::vector<Keyed> keyed;
        std::vector<double> right;
        per_feature[f] = best_split_on(samples, idx, static_cast<int>(f), min_leaf, keyed, right);
    };
    // small nodes are not worth a parallel region
    for_each_index(width, idx.size() >= 4096 ? exec : Execution::serial, search);

    SplitChoice best;
    best.impurity = std::numeric_limits<double>::infinity();
    for (const SplitChoice &c : per_feature)
        if (c.feature >= 0 && c.impurity < best.impurity)
            best = c;
    return best;
}

void node_stats(std::span<const FeatureVector> samples, std::span<const std::size_t> idx, TreeNode &node)
{
    const double n = static_cast<double>(idx.size());
    std::array<double, 2> sum{0.0, 0.0};
    for (std::size_t i : idx)
    {
        sum[0] += samples[i].label[0];
        sum[1] += samples[i].label[1];
    }
    node.value = {sum[0] / n, sum[1] / n};
    double sse = 0.0;
    for (std::size_t i : idx)
    {
        const double dx = samples[i].label[0] - node.value[0];
        const double dy = samples[i].label[1] - node.value[1];
        sse += dx * dx + dy * dy;
    }
    node.impurity = sse;
    node.sample_count = static_cast<int>(idx.size());
}

struct Builder
{
    std::span<const FeatureVector> samples;
    const TreeConfig &config;
    Execution exec;
    std::vector<TreeNode> &nodes;
    double total;

    int grow(std::span<std::size_t> idx, int depth)
    {
        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        TreeNode node;
        node.depth = depth;
        node_stats(samples, idx, node);

        const auto min_leaf = static_cast<std::size_t>(config.min_samples_leaf);
        if (depth >= config.max_depth || idx.size() < 2 * min_leaf || node.impurity == 0.0)
        {
            nodes[static_cast<std::size_t>(id)] = node;
            return id;
        }
        const SplitChoice split = best_split_indexed(samples, idx, min_leaf, exec);
        const double decrease = node.impurity - split.impurity;
        if (split.feature < 0 || !(decrease > 0.0) || !(decrease / total > config.min_impurity_decrease))
        {
            nodes[static_cast<std::size_t>(id)] = node;
            return id;
        }

        const auto f = static_cast<std::size_t>(split.feature);
        auto mid = std::stable_partition(idx.begin(), idx.end(),
                                         [&](std::size_t i) { return samples[i].values[f] <= split.threshold; });
        const auto n_left = static_cast<std::size_t>(mid - idx.begin());
        node.feature = split.feature;
        node.threshold = split.threshold;
        nodes[static_cast<std::size_t>(id)] = node;
        const int left = grow(idx.subspan(0, n_left), depth + 1);
        const int right = grow(idx.subspan(n_left), depth + 1);
        nodes[static_cast<std::size_t>(id)].left = left;
        nodes[static_cast<std::size_t>(id)].right = right;
        return id;
    }
};

void check_samples(std::span<const FeatureVector> samples)
{
    if (samples.empty())
        throw DataError("cannot fit a tree on an empty set");
    const std::size_t width = samples.front().values.size();
    for (const FeatureVector &v : samples)
        if (v.values.size() != width)
            throw DataError("training vectors have inconsistent widths");
}

} // namespace

SplitChoice best_split(std::span<const FeatureVector> samples, int min_samples_leaf, Execution exec)
{
    check_samples(samples);
    std::vector<std::size_t> idx(samples.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return best_split_indexed(samples, idx, static_cast<std::size_t>(std::max(1, min_samples_leaf)), exec);
}

TreeModel fit_tree(std::span<const FeatureVector> samples, const TreeConfig &config, Execution exec)
{
    validate(config);
    check_samples(samples);
    TreeModel tree;
    tree.config = config;
    tree.input_width = samples.front().values.size();
    std::vector<std::size_t> idx(samples.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Builder builder{samples, config, exec, tree.nodes, static_cast<double>(samples.size())};
    builder.grow(idx, 0);
    return tree;
}

int leaf_index(const TreeModel &tree, std::span<const double> features)
{
    if (features.size() != tree.input_width)
        throw DataError("feature width " + std::to_string(features.size()) + " does not match tree width " +
                        std::to_string(tree.input_width));
    int at = 0;
    while (!tree.nodes[static_cast<std::size_t>(at)].is_leaf())
    {
        const TreeNode &n = tree.nodes[static_cast<std::size_t>(at)];
        at = features[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return at;
}

std::array<double, 2> predict(const TreeModel &tree, std::span<const double> features)
{
    return tree.nodes[static_cast<std::size_t>(leaf_index(tree, features))].value;
}

std::vector<std::array<double, 2>> predict_batch(const TreeModel &tree, std::span<const FeatureVector> vectors, Execution exec)
{
    for (const FeatureVector &v : vectors)
        if (v.values.size() != tree.input_width)
            throw DataError("feature width does not match tree width");
    std::vector<std::array<double, 2>> out(vectors.size());
    for_each_index(vectors.size(), exec, [&](std::size_t i) { out[i] = predict(tree, vectors[i].values); });
    return out;
}

namespace
{

nlohmann::json node_to_json(const TreeModel &tree, int id)
{
    const TreeNode &n = tree.nodes[static_cast<std::size_t>(id)];
    nlohmann::json j{{"value", n.value}, {"samples", n.sample_count}, {"impurity", n.impurity}};
    if (!n.is_leaf())
    {
        j["feature"] = n.feature;
        j["threshold"] = n.threshold;
        j["left"] = node_to_json(tree, n.left);
        j["right"] = node_to_json(tree, n.right);
    }
    return j;
}

int node_from_json(const nlohmann::json &j, int depth, std::size_t width, std::vector<TreeNode> &nodes)
{
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    TreeNode n;
    n.depth = depth;
    n.value = j.at("value").get<std::array<double, 2>>();
    n.sample_count = j.at("samples").get<int>();
    n.impurity = j.at("impurity").get<double>();
    if (j.contains("feature"))
    {
        n.feature = j.at("feature").get<int>();
        if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= width)
            throw DataError("tree node feature index out of range");
        n.threshold = j.at("threshold").get<double>();
        nodes[static_cast<std::size_t>(id)] = n;
        const int left = node_from_json(j.at("left"), depth + 1, width, nodes);
        const int right = node_from_json(j.at("right"), depth + 1, width, nodes);
        nodes[static_cast<std::size_t>(id)].left = left;
        nodes[static_cast<std::size_t>(id)].right = right;
        return id;
    }
    nodes[static_cast<std::size_t>(id)] = n;
    return id;
}

} // namespace

nlohmann::json to_json(const TreeModel &tree)
{
    return nlohmann::json{{"format", "beamprint-tree"},
                          {"version", 1},
                          {"config", to_json(tree.config)},
                          {"input_width", tree.input_width},
                          {"root", node_to_json(tree, 0)}};
}

TreeModel tree_from_json(const nlohmann::json &j)
{
    try
    {
        if (j.at("format").get<std::string>() != "beamprint-tree" || j.at("version").get<int>() != 1)
            throw DataError("not a version 1 beamprint-tree model");
        TreeModel t;
        t.config = tree_config_from_json(j.at("config"));
        t.input_width = j.at("input_width").get<std::size_t>();
        node_from_json(j.at("root"), 0, t.input_width, t.nodes);
        return t;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw DataError(std::string("malformed tree model: ") + e.what());
    }
}

} // namespace beamprint
