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
#include "beamprint/rng.hpp"
#include "beamprint/scenario.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <filesystem>
#include <set>

using namespace beamprint;

namespace
{

ScenarioConfig single_site(double w, double h, double res)
{
    ScenarioConfig cfg;
    cfg.area_width_m = w;
    cfg.area_height_m = h;
    cfg.grid_resolution_m = res;
    Site site;
    site.position = Vec3{0.0, 0.0, 10.0};
    site.sectors = {Sector{}};
    cfg.sites = {site};
    return cfg;
}

} // namespace

TEST_CASE("default scenario has 8 sites and 24 cells numbered in site order")
{
    const Scenario s = build_scenario(default_scenario_config());
    CHECK(s.config().sites.size() == 8);
    REQUIRE(s.cells().size() == 24);
    for (std::size_t i = 0; i < 24; ++i)
    {
        CHECK(s.cells()[i].cell_id == static_cast<int>(i) + 1);
        CHECK(s.cells()[i].site_index == i / 3);
        CHECK(s.cells()[i].sector_index == i % 3);
    }
    CHECK(s.find_cell(7) != nullptr);
    CHECK(s.find_cell(25) == nullptr);
    CHECK(s.codebook().beams.size() == 32);
}

TEST_CASE("one site with one sector gives exactly one cell")
{
    const Scenario s = build_scenario(single_site(50, 50, 1));
    REQUIRE(s.cells().size() == 1);
    CHECK(s.cells()[0].cell_id == 1);
}

TEST_CASE("grid is the inclusive lattice over the area")
{
    CHECK(grid_points(build_scenario(single_site(200, 300, 1))).size() == 201u * 301u);
    CHECK(grid_points(build_scenario(single_site(10, 10, 1))).size() == 121u);
    CHECK(grid_points(build_scenario(single_site(10, 10, 2.5))).size() == 25u);

    const auto pts = grid_points(build_scenario(single_site(10, 10, 1)));
    CHECK(pts.front().x == 0.0);
    CHECK(pts.front().y == 0.0);
    CHECK(pts[1].x == 1.0);
    CHECK(pts[1].y == 0.0);
    CHECK(pts.back().x == 10.0);
    CHECK(pts.back().y == 10.0);
    CHECK(pts.front().z == doctest::Approx(1.5));
}

TEST_CASE("points inside buildings are dropped")
{
    ScenarioConfig cfg = single_site(10, 10, 1);
    cfg.sites[0].position = Vec3{-5.0, -5.0, 10.0};
    cfg.buildings = {BuildingFootprint{0, 0, 10, 10, 20}};
    CHECK(grid_points(build_scenario(cfg)).empty());

    cfg.buildings = {BuildingFootprint{2, 2, 4, 4, 20}};
    const auto pts = grid_points(build_scenario(cfg));
    CHECK(pts.size() == 121u - 9u);
    for (const auto &p : pts)
        CHECK_FALSE(cfg.buildings[0].covers(p.x, p.y));
}

TEST_CASE("grid points are deterministic")
{
    const Scenario s = build_scenario(default_scenario_config());
    const auto a = grid_points(s);
    const auto b = grid_points(s);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); i += 97)
    {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
    }
}

TEST_CASE("line of sight against single boxes")
{
    ScenarioConfig cfg = single_site(100, 100, 1);
    const Vec3 tx{0, 50, 10};
    const Vec3 rx{100, 50, 1.5};
    CHECK(line_of_sight(build_scenario(cfg), tx, rx));

    cfg.buildings = {BuildingFootprint{40, 40, 60, 60, 20}};
    CHECK_FALSE(line_of_sight(build_scenario(cfg), tx, rx));

    cfg.buildings = {BuildingFootprint{40, 70, 60, 90, 20}};
    CHECK(line_of_sight(build_scenario(cfg), tx, rx));

    // Low building under the ray near the mast end.
    cfg.buildings = {BuildingFootprint{5, 45, 10, 55, 3}};
    CHECK(line_of_sight(build_scenario(cfg), tx, rx));
}

TEST_CASE("segment-box test agrees with dense sampling on random geometry")
{
    Rng rng(2024);
    int compared = 0;
    for (int trial = 0; trial < 1000; ++trial)
    {
        oracle::Box box{rng.uniform(0, 80), rng.uniform(0, 80), 0, 0, rng.uniform(2, 30)};
        box.x1 = box.x0 + rng.uniform(2, 20);
        box.y1 = box.y0 + rng.uniform(2, 20);
        const std::array<double, 3> a{rng.uniform(-10, 110), rng.uniform(-10, 110), rng.uniform(5, 30)};
        const std::array<double, 3> b{rng.uniform(-10, 110), rng.uniform(-10, 110), 1.5};
        // Skip near-grazing cases where a sampled answer is fragile: require the oracle to
        // agree for the box shrunk and grown by 5 cm.
        const double e = 0.05;
        const bool grown = oracle::sampled_clear(a, b, {box.x0 - e, box.y0 - e, box.x1 + e, box.y1 + e, box.h + e});
        const bool shrunk = oracle::sampled_clear(a, b, {box.x0 + e, box.y0 + e, box.x1 - e, box.y1 - e, box.h - e});
        if (grown != shrunk)
            continue;
        const BuildingFootprint fp{box.x0, box.y0, box.x1, box.y1, box.h};
        CHECK(segment_clear_of_box(Vec3{a[0], a[1], a[2]}, Vec3{b[0], b[1], b[2]}, fp) == grown);
        CHECK(segment_clear_of_box(Vec3{b[0], b[1], b[2]}, Vec3{a[0], a[1], a[2]}, fp) == grown);
        ++compared;
    }
    CHECK(compared > 900);
}

TEST_CASE("line of sight is symmetric in its endpoints")
{
    const Scenario s = build_scenario(default_scenario_config());
    Rng rng(5);
    for (int i = 0; i < 500; ++i)
    {
        const Vec3 a{rng.uniform(0, 200), rng.uniform(0, 330), 10.0};
        const Vec3 b{rng.uniform(0, 200), rng.uniform(0, 330), 1.5};
        CHECK(line_of_sight(s, a, b) == line_of_sight(s, b, a));
    }
}

TEST_CASE("invalid configurations are rejected")
{
    ScenarioConfig cfg = default_scenario_config();
    cfg.grid_resolution_m = 0.0;
    CHECK_THROWS_AS(build_scenario(cfg), ConfigError);

    cfg = default_scenario_config();
    cfg.sites.clear();
    CHECK_THROWS_AS(build_scenario(cfg), ConfigError);

    cfg = default_scenario_config();
    cfg.sites[0].sectors[0].cell_id = 5;
    cfg.sites[1].sectors[0].cell_id = 5;
    CHECK_THROWS_AS(build_scenario(cfg), ConfigError);

    cfg = default_scenario_config();
    cfg.shadowing_sigma_db = -1.0;
    CHECK_THROWS_AS(build_scenario(cfg), ConfigError);

    cfg = default_scenario_config();
    cfg.buildings.push_back(BuildingFootprint{-1, -1, 1, 1, 20});
    CHECK_THROWS_AS(build_scenario(cfg), ConfigError);

    cfg = default_scenario_config();
    cfg.codebook.n_azimuth = 0;
    CHECK_THROWS_AS(build_scenario(cfg), ConfigError);
}

TEST_CASE("explicit cell ids are kept and gaps filled in order")
{
    ScenarioConfig cfg = default_scenario_config();
    cfg.sites[0].sectors[1].cell_id = 100;
    const Scenario s = build_scenario(cfg);
    std::set<int> ids;
    for (const auto &c : s.cells())
        ids.insert(c.cell_id);
    CHECK(ids.size() == 24);
    CHECK(ids.count(100) == 1);
    CHECK(s.cells()[1].cell_id == 100);
}

TEST_CASE("scenario config round-trips through JSON and files")
{
    const ScenarioConfig cfg = default_scenario_config();
    const ScenarioConfig back = scenario_config_from_json(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
    CHECK(build_scenario(back).hash() == build_scenario(cfg).hash());

    const auto path = std::filesystem::temp_directory_path() / "beamprint_test_scenario.json";
    save_scenario_config(cfg, path);
    CHECK(build_scenario(load_scenario_config(path)).hash() == build_scenario(cfg).hash());
    std::filesystem::remove(path);

    ScenarioConfig other = cfg;
    other.rng_seed = 99;
    CHECK(build_scenario(other).hash() != build_scenario(cfg).hash());
}

TEST_CASE("malformed scenario JSON is a config error")
{
    CHECK_THROWS_AS(scenario_config_from_json(nlohmann::json::array()), ConfigError);
    auto j = to_json(default_scenario_config());
    j["grid_resolution_m"] = "fine";
    CHECK_THROWS_AS(scenario_config_from_json(j), ConfigError);
    CHECK_THROWS_AS(load_scenario_config("/nonexistent/scenario.json"), ConfigError);
}
