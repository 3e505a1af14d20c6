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

#include "json.hpp"

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace beamprint
{

struct CdfPoint
{
    double error_m = 0.0;
    double fraction = 0.0;
};

struct EvalReport
{
    std::size_t n_samples = 0;
    double mean_error_m = 0.0;
    double std_error_m = 0.0;               // population (1/N)
    std::map<int, double> percentiles;      // 50, 80, 90, 95 by nearest rank
    std::vector<CdfPoint> cdf;              // sorted errors with fraction i/N
    std::string split;                      // "train" | "test"
    std::string config;                     // run descriptor
};

// Per-pair horizontal distance. Throws DataError on length mismatch or empty input.
std::vector<double> euclidean_errors(std::span<const std::array<double, 2>> predictions,
                                     std::span<const std::array<double, 2>> labels);

// Nearest-rank percentile of an ascending list: element ceil(p/100 * N), 1-based.
double nearest_rank(std::span<const double> sorted, double percent);

// Throws DataError on an empty list.
EvalReport summarize(std::span<const double> errors, std::string split = {}, std::string config = {});

nlohmann::json to_json(const EvalReport &report);
EvalReport eval_report_from_json(const nlohmann::json &j);
// "error_m,fraction" header then one line per point.
std::string cdf_csv(const EvalReport &report);

struct ComparisonRow
{
    std::string config;
    std::string split;
    std::size_t n_samples = 0;
    double mean_error_m = 0.0;
    double std_error_m = 0.0;
    bool best = false;
};

struct Comparison
{
    std::vector<ComparisonRow> rows; // input order
    std::size_t best_index = 0;      // first row with minimal mean error
};

// Throws DataError for fewer than two reports.
Comparison compare(std::span<const EvalReport> reports);
nlohmann::json to_json(const Comparison &comparison);
std::string to_text(const Comparison &comparison);

} // namespace beamprint
