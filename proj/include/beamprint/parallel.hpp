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

#include <cstddef>

namespace beamprint
{

// Every data-parallel kernel keeps a plain serial loop as its reference; results are
// bitwise identical between the two because each iteration writes only its own slot.
enum class Execution
{
    serial,
    parallel,
};

int hardware_threads();

template <typename Fn>
void for_each_index(std::size_t n, Execution exec, Fn &&fn)
{
    if (exec == Execution::serial)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i)
        fn(static_cast<std::size_t>(i));
}

} // namespace beamprint
