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

#include "beamprint/scenario.hpp"

#include "beamprint/errors.hpp"
#include "beamprint/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace beamprint
{

namespace
{

double wrap360(double deg)
{
    double r = std::fmod(deg, 360.0);
    if (r < 0.0)
        r += 360.0;
    return r;
}

std::size_t lattice_count(double extent, double step)
{
    // inclusive of both edges; tolerant to 200/0.1 style rounding
    return static_cast<std::size_t>(std::floor(extent / step + 1e-9)) + 1;
}

} // namespace

std::vector<Sector> default_sectors()
{
    return {Sector{0, 0.0, 5.0, 30.0}, Sector{0, 120.0, 5.0, 30.0}, Sector{0, 240.0, 5.0, 30.0}};
}

ScenarioConfig default_scenario_config()
{
    ScenarioConfig cfg;
    cfg.area_width_m = 200.0;
    cfg.area_height_m = 330.0;
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 2; ++col)
        {
            Site site;
            site.position = Vec3{200.0 * col, 110.0 * row, 10.0};
            site.sectors = default_sectors();
            cfg.sites.push_back(site);
        }

    // Blocks between the streets that connect the sites; heights vary over 12..30 m so
    // every block clears the 10 m mast.
    const double block_w = 24.0;
    const double block_h = 18.0;
    const double pitch_x = 56.0;
    const double pitch_y = 48.0;
    int k = 0;
    for (double y0 = 14.0; y0 + block_h <= cfg.area_height_m - 10.0; y0 += pitch_y)
        for (double x0 = 16.0; x0 + block_w <= cfg.area_width_m - 12.0; x0 += pitch_x, ++k)
        {
            BuildingFootprint b{x0, y0, x0 + block_w, y0 + block_h, 12.0 + 6.0 * (k % 4)};
            cfg.buildings.push_back(b);
        }
    return cfg;
}

const CellRef *Scenario::find_cell(int cell_id) const noexcept
{
    auto it = std::find_if(cells_.begin(), cells_.end(), [cell_id](const CellRef &c) { return c.cell_id == cell_id; });
    return it == cells_.end() ? nullptr : &*it;
}

Scenario build_scenario(ScenarioConfig config)
{
    if (!(config.area_width_m > 0.0) || !(config.area_height_m > 0.0))
        throw ConfigError("scenario area dimensions must be positive");
    if (!(config.grid_resolution_m > 0.0))
        throw ConfigError("grid resolution must be positive");
    if (!(config.carrier_freq_hz > 0.0))
        throw ConfigError("carrier frequency must be positive");
    if (!(config.ue_height_m >= 0.0))
        throw ConfigError("UE height must be non-negative");
    if (!(config.shadowing_sigma_db >= 0.0))
        throw ConfigError("shadowing sigma must be non-negative");
    if (config.sites.empty())
        throw ConfigError("scenario needs at least one site");
    validate(config.element);

    std::set<int> used_ids;
    int max_id = 0;
    for (std::size_t s = 0; s < config.sites.size(); ++s)
    {
        const Site &site = config.sites[s];
        if (!(site.position.z > 0.0))
            throw ConfigError("site " + std::to_string(s) + " height must be positive");
        if (site.sectors.empty())
            throw ConfigError("site " + std::to_string(s) + " has no sectors");
        for (std::size_t t = 0; t < s; ++t)
            if (config.sites[t].position == site.position)
                throw ConfigError("sites " + std::to_string(t) + " and " + std::to_string(s) + " overlap");
        for (const BuildingFootprint &b : config.buildings)
            if (b.covers(site.position.x, site.position.y))
                throw ConfigError("a building covers site " + std::to_string(s));

        std::set<long long> azimuths;
        for (const Sector &sec : site.sectors)
        {
            if (!std::isfinite(sec.tx_power_dbm) || !std::isfinite(sec.boresight_azimuth_deg) ||
                !std::isfinite(sec.mechanical_downtilt_deg))
                throw ConfigError("sector parameters must be finite");
            // compare azimuths on a 1e-6 degree lattice
            const auto key = std::llround(wrap360(sec.boresight_azimuth_deg) * 1e6) % 360000000LL;
            if (!azimuths.insert(key).second)
                throw ConfigError("site " + std::to_string(s) + " has sectors with equal azimuth");
            if (sec.cell_id > 0)
            {
                if (!used_ids.insert(sec.cell_id).second)
                    throw ConfigError("duplicate cell id " + std::to_string(sec.cell_id));
                max_id = std::max(max_id, sec.cell_id);
            }
        }
    }

    for (const BuildingFootprint &b : config.buildings)
        if (!(b.min_x < b.max_x) || !(b.min_y < b.max_y) || !(b.height_m > 0.0))
            throw ConfigError("building footprints need min < max and positive height");

    Scenario scenario;
    for (std::size_t s = 0; s < config.sites.size(); ++s)
        for (std::size_t t = 0; t < config.sites[s].sectors.size(); ++t)
        {
            Sector &sec = config.sites[s].sectors[t];
            if (sec.cell_id <= 0)
                sec.cell_id = ++max_id;
            scenario.cells_.push_back(CellRef{sec.cell_id, s, t});
        }

    scenario.codebook_ = make_codebook(config.codebook);
    scenario.hash_ = fnv1a64(to_json(config).dump());
    scenario.config_ = std::move(config);
    return scenario;
}

std::vector<GridPoint> grid_points(const Scenario &scenario)
{
    const ScenarioConfig &cfg = scenario.config();
    const std::size_t nx = lattice_count(cfg.area_width_m, cfg.grid_resolution_m);
    const std::size_t ny = lattice_count(cfg.area_height_m, cfg.grid_resolution_m);
    std::vector<GridPoint> points;
    points.reserve(nx * ny);
    for (std::size_t iy = 0; iy < ny; ++iy)
    {
        const double y = static_cast<double>(iy) * cfg.grid_resolution_m;
        for (std::size_t ix = 0; ix < nx; ++ix)
        {
            const double x = static_cast<double>(ix) * cfg.grid_resolution_m;
            const bool inside = std::any_of(cfg.buildings.begin(), cfg.buildings.end(),
                                            [&](const BuildingFootprint &b) { return b.covers(x, y); });
            if (!inside)
                points.push_back(GridPoint{x, y, cfg.ue_height_m});
        }
    }
    return points;
}

bool segment_clear_of_box(const Vec3 &a, const Vec3 &b, const BuildingFootprint &box) noexcept
{
    // Slab clipping of the parametric segment a + t (b - a), t in [0, 1], against the
    // closed box. Touching a face or edge counts as intersecting.
    const double origin[3] = {a.x, a.y, a.z};
    const double delta[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
    const double lo[3] = {box.min_x, box.min_y, 0.0};
    const double hi[3] = {box.max_x, box.max_y, box.height_m};
    double t_enter = 0.0;
    double t_exit = 1.0;
    for (int axis = 0; axis < 3; ++axis)
    {
        if (delta[axis] == 0.0)
        {
            if (origin[axis] < lo[axis] || origin[axis] > hi[axis])
                return true;
            continue;
        }
        double t0 = (lo[axis] - origin[axis]) / delta[axis];
        double t1 = (hi[axis] - origin[axis]) / delta[axis];
        if (t0 > t1)
            std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit)
            return true;
    }
    return false;
}

bool line_of_sight(const Scenario &scenario, const Vec3 &tx, const Vec3 &rx)
{
    // Canonical endpoint order makes the floating-point result symmetric.
    const bool swap = std::tie(rx.x, rx.y, rx.z) < std::tie(tx.x, tx.y, tx.z);
    const Vec3 &a = swap ? rx : tx;
    const Vec3 &b = swap ? tx : rx;
    for (const BuildingFootprint &box : scenario.config().buildings)
        if (!segment_clear_of_box(a, b, box))
            return false;
    return true;
}

nlohmann::json to_json(const ScenarioConfig &c)
{
    using nlohmann::json;
    json sites = json::array();
    for (const Site &s : c.sites)
    {
        json sectors = json::array();
        for (const Sector &t : s.sectors)
            sectors.push_back({{"cell_id", t.cell_id},
                               {"azimuth_deg", t.boresight_azimuth_deg},
                               {"downtilt_deg", t.mechanical_downtilt_deg},
                               {"tx_power_dbm", t.tx_power_dbm}});
        sites.push_back({{"position", {s.position.x, s.position.y, s.position.z}}, {"sectors", sectors}});
    }
    json buildings = json::array();
    for (const BuildingFootprint &b : c.buildings)
        buildings.push_back({{"min_x", b.min_x}, {"min_y", b.min_y}, {"max_x", b.max_x}, {"max_y", b.max_y}, {"height_m", b.height_m}});

    const auto &e = c.element;
    const auto &k = c.codebook;
    return json{
        {"area_width_m", c.area_width_m},
        {"area_height_m", c.area_height_m},
        {"grid_resolution_m", c.grid_resolution_m},
        {"ue_height_m", c.ue_height_m},
        {"carrier_freq_hz", c.carrier_freq_hz},
        {"rng_seed", c.rng_seed},
        {"shadowing_sigma_db", c.shadowing_sigma_db},
        {"element",
         {{"max_gain_dbi", e.max_gain_dbi},
          {"azimuth_3db_beamwidth_deg", e.azimuth_3db_beamwidth_deg},
          {"elevation_3db_beamwidth_deg", e.elevation_3db_beamwidth_deg},
          {"front_to_back_db", e.front_to_back_db}}},
        {"codebook",
         {{"n_azimuth", k.n_azimuth},
          {"n_elevation", k.n_elevation},
          {"azimuth_coverage_deg", k.azimuth_coverage_deg},
          {"elevation_min_deg", k.elevation_min_deg},
          {"elevation_max_deg", k.elevation_max_deg},
          {"beam_azimuth_3db_deg", k.beam_azimuth_3db_deg},
          {"beam_elevation_3db_deg", k.beam_elevation_3db_deg},
          {"array_gain_dbi", k.array_gain_dbi},
          {"sidelobe_floor_db", k.sidelobe_floor_db}}},
        {"sites", sites},
        {"buildings", buildings},
    };
}

namespace
{

template <typename T>
void read_opt(const nlohmann::json &j, const char *key, T &out)
{
    if (!j.contains(key))
        return;
    try
    {
        out = j.at(key).get<T>();
    }
    catch (const nlohmann::json::exception &)
    {
        throw ConfigError(std::string("scenario field '") + key + "' has the wrong type");
    }
}

} // namespace

namespace
{

ScenarioConfig parse_scenario(const nlohmann::json &j)
{
    if (!j.is_object())
        throw ConfigError("scenario config must be a JSON object");
    ScenarioConfig c;
    c.sites.clear();
    c.buildings.clear();
    read_opt(j, "area_width_m", c.area_width_m);
    read_opt(j, "area_height_m", c.area_height_m);
    read_opt(j, "grid_resolution_m", c.grid_resolution_m);
    read_opt(j, "ue_height_m", c.ue_height_m);
    read_opt(j, "carrier_freq_hz", c.carrier_freq_hz);
    read_opt(j, "rng_seed", c.rng_seed);
    read_opt(j, "shadowing_sigma_db", c.shadowing_sigma_db);
    if (j.contains("element"))
    {
        const auto &e = j.at("element");
        read_opt(e, "max_gain_dbi", c.element.max_gain_dbi);
        read_opt(e, "azimuth_3db_beamwidth_deg", c.element.azimuth_3db_beamwidth_deg);
        read_opt(e, "elevation_3db_beamwidth_deg", c.element.elevation_3db_beamwidth_deg);
        read_opt(e, "front_to_back_db", c.element.front_to_back_db);
    }
    if (j.contains("codebook"))
    {
        const auto &k = j.at("codebook");
        read_opt(k, "n_azimuth", c.codebook.n_azimuth);
        read_opt(k, "n_elevation", c.codebook.n_elevation);
        read_opt(k, "azimuth_coverage_deg", c.codebook.azimuth_coverage_deg);
        read_opt(k, "elevation_min_deg", c.codebook.elevation_min_deg);
        read_opt(k, "elevation_max_deg", c.codebook.elevation_max_deg);
        read_opt(k, "beam_azimuth_3db_deg", c.codebook.beam_azimuth_3db_deg);
        read_opt(k, "beam_elevation_3db_deg", c.codebook.beam_elevation_3db_deg);
        read_opt(k, "array_gain_dbi", c.codebook.array_gain_dbi);
        read_opt(k, "sidelobe_floor_db", c.codebook.sidelobe_floor_db);
    }
    if (!j.contains("sites") || !j.at("sites").is_array())
        throw ConfigError("scenario config needs a 'sites' array");
    for (const auto &js : j.at("sites"))
    {
        Site site;
        if (!js.contains("position") || !js.at("position").is_array() || js.at("position").size() < 2)
            throw ConfigError("site needs a 'position' array [x, y] or [x, y, z]");
        const auto &p = js.at("position");
        site.position.x = p.at(0).get<double>();
        site.position.y = p.at(1).get<double>();
        site.position.z = p.size() > 2 ? p.at(2).get<double>() : 10.0;
        if (js.contains("sectors"))
        {
            for (const auto &jt : js.at("sectors"))
            {
                Sector sec;
                read_opt(jt, "cell_id", sec.cell_id);
                read_opt(jt, "azimuth_deg", sec.boresight_azimuth_deg);
                read_opt(jt, "downtilt_deg", sec.mechanical_downtilt_deg);
                read_opt(jt, "tx_power_dbm", sec.tx_power_dbm);
                site.sectors.push_back(sec);
            }
        }
        else
            site.sectors = default_sectors();
        c.sites.push_back(site);
    }
    if (j.contains("buildings"))
        for (const auto &jb : j.at("buildings"))
        {
            BuildingFootprint b;
            read_opt(jb, "min_x", b.min_x);
            read_opt(jb, "min_y", b.min_y);
            read_opt(jb, "max_x", b.max_x);
            read_opt(jb, "max_y", b.max_y);
            read_opt(jb, "height_m", b.height_m);
            c.buildings.push_back(b);
        }
    return c;
}

} // namespace

ScenarioConfig scenario_config_from_json(const nlohmann::json &j)
{
    try
    {
        return parse_scenario(j);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("malformed scenario config: ") + e.what());
    }
}

ScenarioConfig load_scenario_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file " + path.string());
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ConfigError("scenario file " + path.string() + ": " + e.what());
    }
    return scenario_config_from_json(j);
}

void save_scenario_config(const ScenarioConfig &config, const std::filesystem::path &path)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write scenario file " + path.string());
    out << to_json(config).dump(2) << '\n';
}

} // namespace beamprint
