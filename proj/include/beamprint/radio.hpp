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

#include "beamprint/scenario.hpp"

#include <cstdint>
#include <span>

namespace beamprint
{

// Direction of a point as seen from a sector: azimuth relative to the boresight,
// elevation relative to the downtilted boresight, both in degrees, plus 3-D range.
struct SectorView
{
    double az_offset_deg = 0.0;
    double el_offset_deg = 0.0;
    double distance_m = 0.0;
};

SectorView sector_view(const Site &site, const Sector &sector, const Vec3 &point);

// Log-normal shadowing term in dB, keyed on (seed, cell id, point coordinates) so the
// same query always returns the same value. Zero when sigma is zero.
double shadowing_db(double sigma_db, std::uint64_t seed, int cell_id, const Vec3 &point);

// tx power + beam gain - free-space loss + shadowing. Uses the scenario's rng_seed
// unless a seed is given.
double rsrp_dbm(const Scenario &scenario, const CellRef &cell, const Beam &beam, const Vec3 &point);
double rsrp_dbm(const Scenario &scenario, const CellRef &cell, const Beam &beam, const Vec3 &point,
                std::uint64_t seed);

// RSRP of every beam of the cell's codebook at the point; out.size() must equal the
// codebook size.
void cell_rsrps(const Scenario &scenario, const CellRef &cell, const Vec3 &point, std::uint64_t seed,
                std::span<double> out);

} // namespace beamprint
