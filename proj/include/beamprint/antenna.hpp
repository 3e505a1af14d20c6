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

#include <vector>

namespace beamprint
{

// Single-element parabolic pattern.
struct AntennaElementParams
{
    double max_gain_dbi = 8.0;
    double azimuth_3db_beamwidth_deg = 65.0;
    double elevation_3db_beamwidth_deg = 65.0;
    double front_to_back_db = 30.0;
};

// Steering grid of the synthesized SSB beams of one sector. Angles are relative to the
// sector boresight (azimuth) and the mechanically downtilted boresight (elevation).
struct CodebookParams
{
    int n_azimuth = 16;
    int n_elevation = 2;
    double azimuth_coverage_deg = 120.0;   // steering spans +-coverage/2
    double elevation_min_deg = -30.0;      // elevation steering range, rows at bin centres
    double elevation_max_deg = 0.0;
    double beam_azimuth_3db_deg = 7.0;
    double beam_elevation_3db_deg = 30.0;
    double array_gain_dbi = 24.082399653118497; // 10*log10(256), 16x16 panel
    double sidelobe_floor_db = 25.0;
};

struct Beam
{
    int beam_id = 0;
    double steer_azimuth_deg = 0.0;
    double steer_elevation_deg = 0.0;
};

struct BeamCodebook
{
    CodebookParams params;
    std::vector<Beam> beams; // beam_id == index
};

void validate(const AntennaElementParams &params);
void validate(const CodebookParams &params);

// Beam ids run azimuth-fastest: id = elevation_row * n_azimuth + azimuth_index.
BeamCodebook make_codebook(const CodebookParams &params);

double element_gain_db(const AntennaElementParams &params, double az_offset_deg, double el_offset_deg);

// Element gain plus the array main lobe around the beam's steering direction, floored
// at sidelobe_floor_db below the peak.
double beam_gain_db(const AntennaElementParams &element, const CodebookParams &codebook, const Beam &beam,
                    double az_deg, double el_deg);

// Free-space loss 20*log10(4*pi*d*f/c). Throws std::domain_error for d <= 0.
double path_loss_db(double freq_hz, double distance_m);

constexpr double kSpeedOfLight = 299792458.0;

} // namespace beamprint
