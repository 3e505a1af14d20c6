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

#include "beamprint/antenna.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace beamprint
{

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3 &, const Vec3 &) = default;
};

struct Sector
{
    int cell_id = 0; // <= 0: assigned by build_scenario
    double boresight_azimuth_deg = 0.0; // counter-clockwise from +x
    double mechanical_downtilt_deg = 5.0;
    double tx_power_dbm = 30.0;
};

struct Site
{
    Vec3 position{0.0, 0.0, 10.0};
    std::vector<Sector> sectors;
};

// Axis-aligned footprint extruded from the ground to height_m.
struct BuildingFootprint
{
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
    double height_m = 0.0;

    // Closed footprint test: boundary counts as inside.
    bool covers(double x, double y) const noexcept
    {
        return x >= min_x && x <= max_x && y >= min_y && y <= max_y;
    }
};

struct ScenarioConfig
{
    double area_width_m = 200.0;
    double area_height_m = 330.0;
    double grid_resolution_m = 1.0;
    double ue_height_m = 1.5;
    double carrier_freq_hz = 28e9;
    std::uint64_t rng_seed = 1;
    double shadowing_sigma_db = 0.0;
    AntennaElementParams element;
    CodebookParams codebook;
    std::vector<Site> sites;
    std::vector<BuildingFootprint> buildings;
};

struct GridPoint
{
    double x = 0.0;
    double y = 0.0;
    double z = 1.5;
};

// Flattened (site, sector) view of one cell.
struct CellRef
{
    int cell_id = 0;
    std::size_t site_index = 0;
    std::size_t sector_index = 0;
};

// Validated, immutable world model. Only constructible through build_scenario.
class Scenario
{
public:
    const ScenarioConfig &config() const noexcept { return config_; }
    const BeamCodebook &codebook() const noexcept { return codebook_; }
    std::span<const CellRef> cells() const noexcept { return cells_; }
    const Site &site(const CellRef &cell) const { return config_.sites[cell.site_index]; }
    const Sector &sector(const CellRef &cell) const { return config_.sites[cell.site_index].sectors[cell.sector_index]; }
    const CellRef *find_cell(int cell_id) const noexcept;
    // FNV-1a of the canonical JSON form of the configuration.
    std::uint64_t hash() const noexcept { return hash_; }

private:
    friend Scenario build_scenario(ScenarioConfig config);
    Scenario() = default;

    ScenarioConfig config_;
    BeamCodebook codebook_;
    std::vector<CellRef> cells_;
    std::uint64_t hash_ = 0;
};

// Eight sites on a 2 x 4 lattice (200 m horizontal, 110 m vertical pitch), three
// sectors each, over a 200 x 330 m area with a block pattern of buildings.
ScenarioConfig default_scenario_config();

// Three default sectors (0, 120, 240 degrees) with unassigned cell ids.
std::vector<Sector> default_sectors();

// Validates the configuration and assigns missing cell ids in site/sector order.
// Throws ConfigError on violated invariants.
Scenario build_scenario(ScenarioConfig config);

// Row-major (y outer, x inner) lattice over the area, points inside buildings dropped.
std::vector<GridPoint> grid_points(const Scenario &scenario);

// True iff the segment tx-rx touches no building box. Grazing contact blocks.
bool line_of_sight(const Scenario &scenario, const Vec3 &tx, const Vec3 &rx);
bool segment_clear_of_box(const Vec3 &a, const Vec3 &b, const BuildingFootprint &box) noexcept;

nlohmann::json to_json(const ScenarioConfig &config);
ScenarioConfig scenario_config_from_json(const nlohmann::json &j);
ScenarioConfig load_scenario_config(const std::filesystem::path &path);
void save_scenario_config(const ScenarioConfig &config, const std::filesystem::path &path);

} // namespace beamprint
