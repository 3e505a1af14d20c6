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

#include "beamprint/eval.hpp"

#include "beamprint/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace beamprint
{

std::vector<double> euclidean_errors(std::span<const std::array<double, 2>> predictions,
                                     std::span<const std::array<double, 2>> labels)
{
    if (predictions.size() != labels.size())
        throw DataError("prediction and label counts differ");
    if (predictions.empty())
        throw DataError("no predictions to score");
    std::vector<double> errors(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i)
        errors[i] = std::hypot(predictions[i][0] - labels[i][0], predictions[i][1] - labels[i][1]);
    return errors;
}

double nearest_rank(std::span<const double> sorted, double percent)
{
    if (sorted.empty())
        throw DataError("percentile of an empty list");
    const double n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(percent * n / 100.0));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

EvalReport summarize(std::span<const double> errors, std::string split, std::string config)
{
    if (errors.empty())
        throw DataError("cannot summarize an empty error list");
    EvalReport r;
    r.n_samples = errors.size();
    r.split = std::move(split);
    r.config = std::move(config);
    const double n = static_cast<double>(errors.size());

    double sum = 0.0;
    for (double e : errors)
        sum += e;
    r.mean_error_m = sum / n;
    double ss = 0.0;
    for (double e : errors)
        ss += (e - r.mean_error_m) * (e - r.mean_error_m);
    r.std_error_m = std::sqrt(ss / n);

    std::vector<double> sorted(errors.begin(), errors.end());
    std::sort(sorted.begin(), sorted.end());
    for (int p : {50, 80, 90, 95})
        r.percentiles[p] = nearest_rank(sorted, p);
    r.cdf.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        r.cdf.push_back(CdfPoint{sorted[i], static_cast<double>(i + 1) / n});
    return r;
}

nlohmann::json to_json(const EvalReport &r)
{
    nlohmann::json pct = nlohmann::json::object();
    for (const auto &[p, v] : r.percentiles)
        pct["p" + std::to_string(p)] = v;
    return nlohmann::json{{"config", r.config},
                          {"split", r.split},
                          {"n_samples", r.n_samples},
                          {"mean_error_m", r.mean_error_m},
                          {"std_error_m", r.std_error_m},
                          {"percentiles", pct}};
}

EvalReport eval_report_from_json(const nlohmann::json &j)
{
    try
    {
        EvalReport r;
        r.config = j.at("config").get<std::string>();
        r.split = j.at("split").get<std::string>();
        r.n_samples = j.at("n_samples").get<std::size_t>();
        r.mean_error_m = j.at("mean_error_m").get<double>();
        r.std_error_m = j.at("std_error_m").get<double>();
        for (const auto &[k, v] : j.at("percentiles").items())
            r.percentiles[std::stoi(k.substr(1))] = v.get<double>();
        return r;
    }
    catch (const std::exception &e)
    {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

std::string cdf_csv(const EvalReport &r)
{
    std::string out = "error_m,fraction\n";
    char buf[64];
    for (const CdfPoint &p : r.cdf)
    {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.error_m, p.fraction);
        out += buf;
    }
    return out;
}

Comparison compare(std::span<const EvalReport> reports)
{
    if (reports.size() < 2)
        throw DataError("comparison needs at least two reports");
    Comparison c;
    for (const EvalReport &r : reports)
        c.rows.push_back(ComparisonRow{r.config, r.split, r.n_samples, r.mean_error_m, r.std_error_m, false});
    for (std::size_t i = 1; i < c.rows.size(); ++i)
        if (c.rows[i].mean_error_m < c.rows[c.best_index].mean_error_m)
            c.best_index = i;
    c.rows[c.best_index].best = true;
    return c;
}

nlohmann::json to_json(const Comparison &c)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const ComparisonRow &r : c.rows)
        rows.push_back({{"config", r.config}, {"split", r.split}, {"n_samples", r.n_samples},
                        {"mean_error_m", r.mean_error_m}, {"std_error_m", r.std_error_m}, {"best", r.best}});
    return nlohmann::json{{"rows", rows}, {"best_index", c.best_index}};
}

std::string to_text(const Comparison &c)
{
    std::size_t width = 6;
    for (const ComparisonRow &r : c.rows)
        width = std::max(width, r.config.size());
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-*s  %-5s  %8s  %10s  %10s\n", static_cast<int>(width), "config", "split", "n",
                  "mean (m)", "std (m)");
    out << buf;
    for (const ComparisonRow &r : c.rows)
    {
        std::snprintf(buf, sizeof buf, "%c %-*s  %-5s  %8zu  %10.3f  %10.3f\n", r.best ? '*' : ' ', static_cast<int>(width),
                      r.config.c_str(), r.split.c_str(), r.n_samples, r.mean_error_m, r.std_error_m);
        out << buf;
    }
    return out.str();
}

} // namespace beamprint
