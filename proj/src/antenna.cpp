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

#include "beamprint/antenna.hpp"

#include "beamprint/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace beamprint
{

void validate(const AntennaElementParams &p)
{
    if (!(p.azimuth_3db_beamwidth_deg > 0.0 && p.azimuth_3db_beamwidth_deg < 180.0))
        throw ConfigError("element azimuth beamwidth must lie in (0, 180) degrees");
    if (!(p.elevation_3db_beamwidth_deg > 0.0 && p.elevation_3db_beamwidth_deg < 180.0))
        throw ConfigError("element elevation beamwidth must lie in (0, 180) degrees");
    if (!(p.front_to_back_db > 0.0))
        throw ConfigError("element front-to-back ratio must be positive");
    if (!std::isfinite(p.max_gain_dbi))
        throw ConfigError("element gain must be finite");
}

void validate(const CodebookParams &p)
{
    if (p.n_azimuth < 1 || p.n_elevation < 1)
        throw ConfigError("codebook needs at least one azimuth and one elevation beam");
    if (!(p.azimuth_coverage_deg > 0.0 && p.azimuth_coverage_deg <= 120.0))
        throw ConfigError("codebook azimuth coverage must lie in (0, 120] degrees");
    if (!(p.elevation_max_deg > p.elevation_min_deg))
        throw ConfigError("codebook elevation range is empty");
    if (!(p.beam_azimuth_3db_deg > 0.0) || !(p.beam_elevation_3db_deg > 0.0))
        throw ConfigError("beam beamwidths must be positive");
    if (!(p.sidelobe_floor_db > 0.0) || !std::isfinite(p.array_gain_dbi))
        throw ConfigError("invalid array gain or sidelobe floor");
}

BeamCodebook make_codebook(const CodebookParams &params)
{
    validate(params);
    BeamCodebook book{params, {}};
    book.beams.reserve(static_cast<std::size_t>(params.n_azimuth * params.n_elevation));
    const double az_step = params.azimuth_coverage_deg / params.n_azimuth;
    const double el_step = (params.elevation_max_deg - params.elevation_min_deg) / params.n_elevation;
    for (int e = 0; e < params.n_elevation; ++e)
        for (int a = 0; a < params.n_azimuth; ++a)
        {
            Beam beam;
            beam.beam_id = e * params.n_azimuth + a;
            beam.steer_azimuth_deg = -0.5 * params.azimuth_coverage_deg + (a + 0.5) * az_step;
            // row 0 is the one closest to the horizon
            beam.steer_elevation_deg = params.elevation_max_deg - (e + 0.5) * el_step;
            book.beams.push_back(beam);
        }
    return book;
}

double element_gain_db(const AntennaElementParams &p, double az_offset_deg, double el_offset_deg)
{
    const double a = az_offset_deg / p.azimuth_3db_beamwidth_deg;
    const double e = el_offset_deg / p.elevation_3db_beamwidth_deg;
    return p.max_gain_dbi - std::min(12.0 * a * a + 12.0 * e * e, p.front_to_back_db);
}

double beam_gain_db(const AntennaElementParams &element, const CodebookParams &codebook, const Beam &beam,
                    double az_deg, double el_deg)
{
    const double a = (az_deg - beam.steer_azimuth_deg) / codebook.beam_azimuth_3db_deg;
    const double e = (el_deg - beam.steer_elevation_deg) / codebook.beam_elevation_3db_deg;
    const double lobe = std::min(12.0 * a * a + 12.0 * e * e, codebook.sidelobe_floor_db);
    return element_gain_db(element, az_deg, el_deg) + codebook.array_gain_dbi - lobe;
}

double path_loss_db(double freq_hz, double distance_m)
{
    if (!(distance_m > 0.0))
        throw std::domain_error("path loss needs a positive distance");
    return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * freq_hz / kSpeedOfLight);
}

} // namespace beamprint
