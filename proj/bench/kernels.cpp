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

// Serial reference vs OpenMP kernels. Arg 0 runs the serial path, 1 the parallel one.

#include "beamprint/dtree.hpp"
#include "beamprint/features.hpp"
#include "beamprint/fingerprint.hpp"
#include "beamprint/mlp.hpp"

#include <benchmark/benchmark.h>

using namespace beamprint;

namespace
{

Execution mode(const benchmark::State &state)
{
    return state.range(0) ? Execution::parallel : Execution::serial;
}

const Scenario &scenario()
{
    static const Scenario s = [] {
        ScenarioConfig config = default_scenario_config();
        config.grid_resolution_m = 2.0;
        return build_scenario(config);
    }();
    return s;
}

const FeatureSet &samples()
{
    static const FeatureSet set = [] {
        FeatureConfig f;
        f.n_neighbor_beams = 2;
        return extract_all(los_filter(build_dataset(scenario())).records, for_topology(f, Topology::network_level));
    }();
    return set;
}

void BM_build_dataset(benchmark::State &state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(build_dataset(scenario(), {}, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid_points(scenario()).size()));
}

void BM_best_split(benchmark::State &state)
{
    const auto &v = samples().vectors;
    for (auto _ : state)
        benchmark::DoNotOptimize(best_split(v, 2, mode(state)));
}

void BM_fit_tree(benchmark::State &state)
{
    const auto &v = samples().vectors;
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_tree(v, TreeConfig{}, mode(state)));
}

void BM_mlp_predict_batch(benchmark::State &state)
{
    const auto &v = samples().vectors;
    static const MlpModel model = [&] {
        MlpConfig c;
        c.hidden_layer_widths = {64, 64};
        c.max_epochs = 1;
        MlpModel m = init_mlp(c, v.front().values.size());
        train(m, v);
        return m;
    }();
    for (auto _ : state)
        benchmark::DoNotOptimize(predict_batch(model, v, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

} // namespace

BENCHMARK(BM_build_dataset)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_best_split)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit_tree)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mlp_predict_batch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
