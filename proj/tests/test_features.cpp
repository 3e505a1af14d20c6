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
#include "beamprint/features.hpp"
#include "beamprint/rng.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace beamprint;

namespace
{

FeatureConfig make(int serving, int neighbors, bool cell_id)
{
    FeatureConfig c;
    c.n_serving_beams = serving;
    c.n_neighbor_beams = neighbors;
    c.include_serving_cell_id = cell_id;
    return c;
}

// Serving cell 5 with beams 7, 3, 12, 1; neighbours 9 (two beams) and 2.
FingerprintRecord sample_record()
{
    FingerprintRecord r;
    r.x = 12.0;
    r.y = 34.0;
    r.serving_cell_id = 5;
    r.los_to_serving = true;
    r.measurements = {{5, 7, -40.0}, {5, 3, -42.0}, {9, 4, -43.0}, {5, 12, -45.0}, {9, 5, -46.0},
                      {2, 1, -47.0}, {5, 1, -50.0}};
    return r;
}

FeatureVector fv(std::vector<double> values)
{
    return FeatureVector{std::move(values), {0.0, 0.0}};
}

} // namespace

TEST_CASE("feature widths")
{
    CHECK(feature_width(make(4, 0, true)) == 9);
    CHECK(feature_width(make(3, 0, true)) == 7);
    CHECK(feature_width(make(3, 2, true)) == 13);
    CHECK(feature_width(make(3, 2, false)) == 12);

    FeatureConfig hot = make(3, 2, true);
    hot.one_hot_ids = true;
    hot.max_cell_id = 24;
    hot.max_beam_id = 31;
    CHECK(feature_width(hot) == 3 * 33 + 25 + 2 * (25 + 32 + 1));
}

TEST_CASE("feature layout")
{
    const FingerprintRecord r = sample_record();
    const auto v = extract(r, make(3, 2, true));
    REQUIRE(v);
    const std::vector<double> expected{7, -40, 3, -42, 12, -45, 5, 9, 4, -43, 2, 1, -47};
    CHECK(v->values == expected);
    CHECK(v->label[0] == 12.0);
    CHECK(v->label[1] == 34.0);

    const auto w = extract(r, make(4, 0, false));
    REQUIRE(w);
    CHECK(w->values == std::vector<double>{7, -40, 3, -42, 12, -45, 1, -50});
}

TEST_CASE("one-hot layout")
{
    FeatureConfig c = make(1, 1, true);
    c.one_hot_ids = true;
    c.max_cell_id = 9;
    c.max_beam_id = 15;
    const auto v = extract(sample_record(), c);
    REQUIRE(v);
    REQUIRE(v->values.size() == feature_width(c));
    std::vector<double> expected(feature_width(c), 0.0);
    expected[7] = 1.0;         // serving beam 7
    expected[16] = -40.0;      // its rsrp
    expected[17 + 5] = 1.0;    // serving cell 5
    expected[27 + 9] = 1.0;    // neighbour cell 9
    expected[37 + 4] = 1.0;    // neighbour beam 4
    expected[53] = -43.0;
    CHECK(v->values == expected);
}

TEST_CASE("records without enough beams or cells are skipped")
{
    SkipReason reason = SkipReason::none;
    CHECK_FALSE(extract(sample_record(), make(5, 0, true), &reason));
    CHECK(reason == SkipReason::too_few_serving_beams);
    CHECK_FALSE(extract(sample_record(), make(3, 3, true), &reason));
    CHECK(reason == SkipReason::too_few_neighbor_cells);
    CHECK(extract(sample_record(), make(3, 2, true), &reason));
    CHECK(reason == SkipReason::none);

    std::vector<FingerprintRecord> records{sample_record(), sample_record()};
    records[1].measurements.resize(3);
    const FeatureSet set = extract_all(records, make(3, 1, true));
    CHECK(set.vectors.size() == 1);
    CHECK(set.source_index == std::vector<std::size_t>{0});
    CHECK(set.skipped_serving == 1);
}

TEST_CASE("topology and validation")
{
    FeatureConfig c = for_topology(make(3, 2, true), Topology::cell_specific);
    CHECK_FALSE(c.include_serving_cell_id);
    CHECK(feature_width(c) == 12);
    CHECK_NOTHROW(validate(c));
    c.include_serving_cell_id = true;
    CHECK_THROWS_AS(validate(c), ConfigError);
    CHECK_THROWS_AS(validate(make(0, 0, true)), ConfigError);
    CHECK_THROWS_AS(validate(make(3, -1, true)), ConfigError);
    CHECK(topology_from_string("cell") == Topology::cell_specific);
    CHECK(topology_from_string("network") == Topology::network_level);
    CHECK_THROWS_AS(topology_from_string("global"), ConfigError);
}

TEST_CASE("feature config JSON round trip and descriptors")
{
    FeatureConfig c = make(3, 2, true);
    c.one_hot_ids = true;
    c.max_cell_id = 24;
    c.max_beam_id = 31;
    CHECK(feature_config_from_json(to_json(c)) == c);
    CHECK(descriptor(make(3, 2, true)) == "s3n2c");
    CHECK(descriptor(make(4, 0, false)) == "s4n0");
    CHECK(descriptor(c) == "s3n2ch");
}

TEST_CASE("normalizer statistics")
{
    std::vector<FeatureVector> two{fv({0.0}), fv({2.0})};
    NormalizationStats s = fit_normalizer(two);
    CHECK(s.mean[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.std[0] == doctest::Approx(1.0).epsilon(1e-15));

    std::vector<FeatureVector> constant{fv({3.5}), fv({3.5}), fv({3.5})};
    s = fit_normalizer(constant);
    CHECK(s.mean[0] == 3.5);
    CHECK(s.std[0] == 1.0);

    CHECK_THROWS_AS(fit_normalizer(std::vector<FeatureVector>{}), DataError);
    CHECK_THROWS_AS(fit_normalizer(std::vector<FeatureVector>{fv({1.0}), fv({1.0, 2.0})}), DataError);
}

TEST_CASE("normalized training columns have zero mean and unit spread")
{
    Rng rng(8);
    std::vector<FeatureVector> data;
    for (int i = 0; i < 500; ++i)
        data.push_back(FeatureVector{{rng.uniform(-100, -40), rng.uniform(0, 31), 7.0},
                                     {rng.uniform(0, 200), rng.uniform(0, 330)}});
    const NormalizationStats s = fit_normalizer(data);
    for (std::size_t f = 0; f < 3; ++f)
    {
        std::vector<double> raw, col;
        for (const auto &v : data)
        {
            raw.push_back(v.values[f]);
            col.push_back(beamprint::apply(s, v.values)[f]);
        }
        CHECK(s.mean[f] == doctest::Approx(oracle::mean(raw)).epsilon(1e-12));
        CHECK(std::abs(oracle::mean(col)) < 1e-9);
        if (f < 2)
            CHECK(oracle::population_std(col) == doctest::Approx(1.0).epsilon(1e-9));
    }
    std::vector<double> lx;
    for (const auto &v : data)
        lx.push_back(v.label[0]);
    CHECK(s.label_std[0] == doctest::Approx(oracle::population_std(lx)).epsilon(1e-12));
}

TEST_CASE("apply, labels and inversion")
{
    NormalizationStats s;
    s.mean = {1.0, -2.0};
    s.std = {2.0, 4.0};
    s.label_mean = {50.0, 25.0};
    s.label_std = {10.0, 5.0};
    CHECK(beamprint::apply(s, s.mean) == std::vector<double>{0.0, 0.0});
    const auto z = normalize_label(s, {100.0, 50.0});
    const auto back = invert_labels(s, z);
    CHECK(back[0] == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(back[1] == doctest::Approx(50.0).epsilon(1e-12));

    std::vector<double> values{3.0, 6.0};
    apply_in_place(s, values);
    CHECK(values == std::vector<double>{1.0, 2.0});
    std::vector<double> wrong{1.0};
    CHECK_THROWS_AS(apply_in_place(s, wrong), DataError);

    const NormalizationStats r = normalizer_from_json(to_json(s));
    CHECK(r.mean == s.mean);
    CHECK(r.std == s.std);
    CHECK(r.label_mean == s.label_mean);
    CHECK(r.label_std == s.label_std);
}
