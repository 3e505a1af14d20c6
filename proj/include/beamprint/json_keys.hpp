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

#include "beamprint/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>
#include <string_view>

namespace beamprint
{

// Throws ConfigError naming the first key of `j` that is not in `allowed`.
inline void reject_unknown_keys(const nlohmann::json &j, std::initializer_list<std::string_view> allowed, std::string_view what)
{
    if (!j.is_object())
        throw ConfigError(std::string(what) + " must be a JSON object");
    for (const auto &item : j.items())
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw ConfigError("unknown key '" + item.key() + "' in " + std::string(what));
}

} // namespace beamprint
