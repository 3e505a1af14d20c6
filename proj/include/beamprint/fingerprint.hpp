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

#include "beamprint/parallel.hpp"
#include "beamprint/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

namespace beamprint
{

struct Measurement
{
    int cell_id = 0;
    int beam_id = 0;
    double rsrp_dbm = 0.0;

    friend bool operator==(const Measurement &, const Measurement &) = default;
};

// Strongest first; equal powers ordered by (cell_id, beam_id).
bool stronger(const Measurement &a, const Measurement &b) noexcept;

struct FingerprintRecord
{
    double x = 0.0;
    double y = 0.0;
    std::vector<Measurement> measurements; // sorted with stronger()
    int serving_cell_id = 0;               // cell of measurements.front()
    bool los_to_serving = false;

    friend bool operator==(const FingerprintRecord &, const FingerprintRecord &) = default;
};

// What each record keeps of the full cells x beams measurement list. Zero keeps all.
// The defaults keep the 4 strongest beams of each of the 8 strongest cells, enough for
// every feature layout with up to 4 serving beams and 7 neighbour cells.
struct DatasetOptions
{
    std::optional<std::uint64_t> seed; // shadowing seed; scenario rng_seed when empty
    int keep_cells = 8;
    int keep_beams_per_cell = 4;
};

struct Dataset
{
    std::vector<FingerprintRecord> records;
    std::uint64_t scenario_hash = 0;
    std::uint64_t seed = 0;
    int keep_cells = 0;
    int keep_beams_per_cell = 0;

    friend bool operator==(const Dataset &, const Dataset &) = default;
};

// Fingerprint of one location.
FingerprintRecord compute_record(const Scenario &scenario, const GridPoint &point, std::uint64_t seed,
                                 int keep_cells, int keep_beams_per_cell);

// One record per grid point in grid order. Throws DataError on an empty grid.
Dataset build_dataset(const Scenario &scenario, const DatasetOptions &options = {},
                      Execution exec = Execution::parallel);

// Records with line of sight to their serving cell's site, in order. Throws DataError
// if none remain.
Dataset los_filter(const Dataset &dataset);

std::map<int, Dataset> partition_by_cell(const Dataset &dataset);

// Line-delimited JSON: one header object then one object per record.
void save_dataset(const Dataset &dataset, const std::filesystem::path &path);
Dataset load_dataset(const std::filesystem::path &path);
// Also checks the scenario hash and that every referenced cell exists.
Dataset load_dataset(const std::filesystem::path &path, const Scenario &scenario);

// Record line codec shared with the inference input format.
nlohmann::json record_to_json(const FingerprintRecord &record);
// Parses a record line; serving and los are optional (derived/false when absent).
// Throws DataError naming the offending field.
FingerprintRecord record_from_json(const nlohmann::json &j);

std::string hash_hex(std::uint64_t h);

// Order-sensitive hash of every field of every record.
std::uint64_t content_hash(const Dataset &dataset);

} // namespace beamprint
