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

#include "beamprint/radio.hpp"

#include "beamprint/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace beamprint
{

namespace
{

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double wrap180(double deg)
{
    double r = std::fmod(deg + 180.0, 360.0);
    if (r < 0.0)
        r += 360.0;
    return r - 180.0;
}

} // namespace

SectorView sector_view(const Site &site, const Sector &sector, const Vec3 &point)
{
    const double dx = point.x - site.position.x;
    const double dy = point.y - site.position.y;
    const double dz = point.z - site.position.z;
    const double horizontal = std::hypot(dx, dy);
    SectorView v;
    v.distance_m = std::sqrt(dx * dx + dy * dy + dz * dz);
    v.az_offset_deg = wrap180(std::atan2(dy, dx) * kRadToDeg - sector.boresight_azimuth_deg);
    // boresight points mechanical_downtilt_deg below the horizon
    v.el_offset_deg = std::atan2(dz, horizontal) * kRadToDeg + sector.mechanical_downtilt_deg;
    return v;
}

double shadowing_db(double sigma_db, std::uint64_t seed, int cell_id, const Vec3 &point)
{
    if (sigma_db == 0.0)
        return 0.0;
    std::uint64_t key = hash_combine(seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(cell_id)));
    key = hash_combine(key, std::bit_cast<std::uint64_t>(point.x));
    key = hash_combine(key, std::bit_cast<std::uint64_t>(point.y));
    key = hash_combine(key, std::bit_cast<std::uint64_t>(point.z));
    return sigma_db * keyed_normal(key);
}

double rsrp_dbm(const Scenario &scenario, const CellRef &cell, const Beam &beam, const Vec3 &point,
                std::uint64_t seed)
{
    const ScenarioConfig &cfg = scenario.config();
    const Sector &sector = scenario.sector(cell);
    const SectorView v = sector_view(scenario.site(cell), sector, point);
    const double gain = beam_gain_db(cfg.element, cfg.codebook, beam, v.az_offset_deg, v.el_offset_deg);
    return sector.tx_power_dbm + gain - path_loss_db(cfg.carrier_freq_hz, v.distance_m) +
           shadowing_db(cfg.shadowing_sigma_db, seed, cell.cell_id, point);
}

double rsrp_dbm(const Scenario &scenario, const CellRef &cell, const Beam &beam, const Vec3 &point)
{
    return rsrp_dbm(scenario, cell, beam, point, scenario.config().rng_seed);
}

void cell_rsrps(const Scenario &scenario, const CellRef &cell, const Vec3 &point, std::uint64_t seed,
                std::span<double> out)
{
    const ScenarioConfig &cfg = scenario.config();
    const auto &beams = scenario.codebook().beams;
    if (out.size() != beams.size())
        throw std::invalid_argument("cell_rsrps: output span does not match the codebook size");
    const Sector &sector = scenario.sector(cell);
    const SectorView v = sector_view(scenario.site(cell), sector, point);
    const double loss = path_loss_db(cfg.carrier_freq_hz, v.distance_m);
    const double shadow = shadowing_db(cfg.shadowing_sigma_db, seed, cell.cell_id, point);
    // same association order as rsrp_dbm so both paths agree bit for bit
    for (std::size_t b = 0; b < beams.size(); ++b)
        out[b] = sector.tx_power_dbm + beam_gain_db(cfg.element, cfg.codebook, beams[b], v.az_offset_deg, v.el_offset_deg) -
                 loss + shadow;
}

} // namespace beamprint
