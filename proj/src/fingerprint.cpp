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

#include "beamprint/fingerprint.hpp"

#include "beamprint/errors.hpp"
#include "beamprint/radio.hpp"
#include "beamprint/rng.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <tuple>

namespace beamprint
{

bool stronger(const Measurement &a, const Measurement &b) noexcept
{
    if (a.rsrp_dbm != b.rsrp_dbm)
        return a.rsrp_dbm > b.rsrp_dbm;
    return std::tie(a.cell_id, a.beam_id) < std::tie(b.cell_id, b.beam_id);
}

FingerprintRecord compute_record(const Scenario &scenario, const GridPoint &point, std::uint64_t seed,
                                 int keep_cells, int keep_beams_per_cell)
{
    const auto cells = scenario.cells();
    const auto &beams = scenario.codebook().beams;
    const std::size_t n_beams = beams.size();
    const std::size_t per_cell = keep_beams_per_cell > 0 ? std::min<std::size_t>(keep_beams_per_cell, n_beams) : n_beams;
    const Vec3 ue{point.x, point.y, point.z};

    FingerprintRecord rec;
    rec.x = point.x;
    rec.y = point.y;
    rec.measurements.reserve(cells.size() * per_cell);

    std::vector<double> rsrp(n_beams);
    std::vector<Measurement> cell_meas(n_beams);
    for (const CellRef &cell : cells)
    {
        cell_rsrps(scenario, cell, ue, seed, rsrp);
        for (std::size_t b = 0; b < n_beams; ++b)
            cell_meas[b] = Measurement{cell.cell_id, beams[b].beam_id, rsrp[b]};
        // per-cell top-k then global sort gives the same prefix as sorting everything
        std::partial_sort(cell_meas.begin(), cell_meas.begin() + static_cast<std::ptrdiff_t>(per_cell), cell_meas.end(), stronger);
        rec.measurements.insert(rec.measurements.end(), cell_meas.begin(), cell_meas.begin() + static_cast<std::ptrdiff_t>(per_cell));
    }
    std::sort(rec.measurements.begin(), rec.measurements.end(), stronger);

    if (keep_cells > 0 && static_cast<std::size_t>(keep_cells) < cells.size())
    {
        std::vector<int> kept;
        std::erase_if(rec.measurements, [&](const Measurement &m) {
            if (std::find(kept.begin(), kept.end(), m.cell_id) != kept.end())
                return false;
            if (kept.size() < static_cast<std::size_t>(keep_cells))
            {
                kept.push_back(m.cell_id);
                return false;
            }
            return true;
        });
    }

    rec.serving_cell_id = rec.measurements.front().cell_id;
    const CellRef *serving = scenario.find_cell(rec.serving_cell_id);
    rec.los_to_serving = line_of_sight(scenario, scenario.site(*serving).position, ue);
    return rec;
}

Dataset build_dataset(const Scenario &scenario, const DatasetOptions &options, Execution exec)
{
    const std::vector<GridPoint> points = grid_points(scenario);
    if (points.empty())
        throw DataError("scenario grid is empty: nothing to fingerprint");
    Dataset ds;
    ds.scenario_hash = scenario.hash();
    ds.seed = options.seed.value_or(scenario.config().rng_seed);
    ds.keep_cells = std::max(0, options.keep_cells);
    ds.keep_beams_per_cell = std::max(0, options.keep_beams_per_cell);
    ds.records.resize(points.size());
    for_each_index(points.size(), exec, [&](std::size_t i) {
        ds.records[i] = compute_record(scenario, points[i], ds.seed, ds.keep_cells, ds.keep_beams_per_cell);
    });
    return ds;
}

Dataset los_filter(const Dataset &dataset)
{
    Dataset out = dataset;
    std::erase_if(out.records, [](const FingerprintRecord &r) { return !r.los_to_serving; });
    if (out.records.empty())
        throw DataError("no line-of-sight records left after filtering");
    return out;
}

std::map<int, Dataset> partition_by_cell(const Dataset &dataset)
{
    std::map<int, Dataset> parts;
    for (const FingerprintRecord &r : dataset.records)
    {
        auto [it, inserted] = parts.try_emplace(r.serving_cell_id);
        if (inserted)
        {
            it->second.scenario_hash = dataset.scenario_hash;
            it->second.seed = dataset.seed;
            it->second.keep_cells = dataset.keep_cells;
            it->second.keep_beams_per_cell = dataset.keep_beams_per_cell;
        }
        it->second.records.push_back(r);
    }
    return parts;
}

std::string hash_hex(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json record_to_json(const FingerprintRecord &r)
{
    nlohmann::json meas = nlohmann::json::array();
    for (const Measurement &m : r.measurements)
        meas.push_back(nlohmann::json::array({m.cell_id, m.beam_id, m.rsrp_dbm}));
    return nlohmann::json{{"x", r.x}, {"y", r.y}, {"serving", r.serving_cell_id}, {"los", r.los_to_serving}, {"meas", meas}};
}

namespace
{

template <typename T>
T field(const nlohmann::json &j, const char *key)
{
    if (!j.contains(key))
        throw DataError(std::string("missing field '") + key + "'");
    try
    {
        return j.at(key).get<T>();
    }
    catch (const nlohmann::json::exception &)
    {
        throw DataError(std::string("field '") + key + "' has the wrong type");
    }
}

} // namespace

FingerprintRecord record_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        throw DataError("record is not a JSON object");
    FingerprintRecord r;
    r.x = j.contains("x") ? field<double>(j, "x") : 0.0;
    r.y = j.contains("y") ? field<double>(j, "y") : 0.0;
    if (!j.contains("meas") || !j.at("meas").is_array())
        throw DataError("field 'meas' missing or not an array");
    const auto &meas = j.at("meas");
    r.measurements.reserve(meas.size());
    for (std::size_t i = 0; i < meas.size(); ++i)
    {
        const auto &m = meas[i];
        if (!m.is_array() || m.size() != 3 || !m[0].is_number_integer() || !m[1].is_number_integer() || !m[2].is_number())
            throw DataError("field 'meas[" + std::to_string(i) + "]' must be [cell, beam, rsrp]");
        r.measurements.push_back(Measurement{m[0].get<int>(), m[1].get<int>(), m[2].get<double>()});
    }
    if (r.measurements.empty())
        throw DataError("field 'meas' is empty");
    if (!std::is_sorted(r.measurements.begin(), r.measurements.end(), stronger))
        throw DataError("field 'meas' is not sorted by descending rsrp");
    r.serving_cell_id = j.contains("serving") ? field<int>(j, "serving") : r.measurements.front().cell_id;
    if (r.serving_cell_id != r.measurements.front().cell_id)
        throw DataError("field 'serving' does not match the strongest measurement");
    r.los_to_serving = j.contains("los") ? field<bool>(j, "los") : false;
    return r;
}

void save_dataset(const Dataset &ds, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write dataset " + path.string());
    const nlohmann::json header{{"format", "beamprint-dataset"},
                                {"version", 1},
                                {"scenario_hash", hash_hex(ds.scenario_hash)},
                                {"seed", ds.seed},
                                {"keep_cells", ds.keep_cells},
                                {"keep_beams_per_cell", ds.keep_beams_per_cell},
                                {"records", ds.records.size()}};
    out << header.dump() << '\n';
    for (const FingerprintRecord &r : ds.records)
        out << record_to_json(r).dump() << '\n';
    if (!out)
        throw DataError("write failed for dataset " + path.string());
}

Dataset load_dataset(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open dataset " + path.string());
    const std::string where = path.string() + ":";
    std::string line;
    if (!std::getline(in, line))
        throw DataError(where + "1: missing header line");

    Dataset ds;
    std::size_t expected = 0;
    try
    {
        const auto header = nlohmann::json::parse(line);
        if (header.value("format", "") != "beamprint-dataset")
            throw DataError("header 'format' is not beamprint-dataset");
        if (header.value("version", 0) != 1)
            throw DataError("unsupported header 'version'");
        ds.scenario_hash = std::stoull(field<std::string>(header, "scenario_hash"), nullptr, 16);
        ds.seed = field<std::uint64_t>(header, "seed");
        ds.keep_cells = field<int>(header, "keep_cells");
        ds.keep_beams_per_cell = field<int>(header, "keep_beams_per_cell");
        expected = field<std::size_t>(header, "records");
    }
    catch (const nlohmann::json::exception &e)
    {
        throw DataError(where + "1: " + e.what());
    }
    catch (const std::invalid_argument &)
    {
        throw DataError(where + "1: field 'scenario_hash' is not hexadecimal");
    }
    catch (const DataError &e)
    {
        throw DataError(where + "1: " + e.what());
    }

    ds.records.reserve(expected);
    std::size_t line_no = 1;
    std::set<std::pair<double, double>> seen;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty())
            continue;
        try
        {
            FingerprintRecord r = record_from_json(nlohmann::json::parse(line));
            if (!seen.emplace(r.x, r.y).second)
                throw DataError("duplicate location");
            ds.records.push_back(std::move(r));
        }
        catch (const nlohmann::json::exception &e)
        {
            throw DataError(where + std::to_string(line_no) + ": " + e.what());
        }
        catch (const DataError &e)
        {
            throw DataError(where + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (ds.records.size() != expected)
        throw DataError(where + std::to_string(line_no) + ": truncated, header promises " + std::to_string(expected) +
                        " records, found " + std::to_string(ds.records.size()));
    return ds;
}

Dataset load_dataset(const std::filesystem::path &path, const Scenario &scenario)
{
    Dataset ds = load_dataset(path);
    if (ds.scenario_hash != scenario.hash())
        throw DataError(path.string() + ": scenario hash " + hash_hex(ds.scenario_hash) + " does not match scenario " +
                        hash_hex(scenario.hash()));
    for (std::size_t i = 0; i < ds.records.size(); ++i)
        for (const Measurement &m : ds.records[i].measurements)
            if (scenario.find_cell(m.cell_id) == nullptr)
                throw DataError(path.string() + ": record " + std::to_string(i) + " references unknown cell " +
                                std::to_string(m.cell_id));
    return ds;
}


std::uint64_t content_hash(const Dataset &ds)
{
    std::uint64_t h = hash_combine(ds.scenario_hash, ds.seed);
    h = hash_combine(h, static_cast<std::uint64_t>(ds.keep_cells) << 32 | static_cast<std::uint32_t>(ds.keep_beams_per_cell));
    for (const FingerprintRecord &r : ds.records)
    {
        h = hash_combine(h, std::bit_cast<std::uint64_t>(r.x));
        h = hash_combine(h, std::bit_cast<std::uint64_t>(r.y));
        h = hash_combine(h, static_cast<std::uint64_t>(r.serving_cell_id) << 1 | (r.los_to_serving ? 1u : 0u));
        for (const Measurement &m : r.measurements)
        {
            h = hash_combine(h, static_cast<std::uint64_t>(m.cell_id) << 32 | static_cast<std::uint32_t>(m.beam_id));
            h = hash_combine(h, std::bit_cast<std::uint64_t>(m.rsrp_dbm));
        }
    }
    return h;
}

} // namespace beamprint
