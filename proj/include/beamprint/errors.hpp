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

#include <stdexcept>
#include <string>

namespace beamprint
{

// Invalid scenario, feature, model or experiment configuration. CLI exit code 1.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Malformed, truncated or inconsistent data files and inputs. CLI exit code 2.
class DataError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss. CLI exit code 3.
class DivergenceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace beamprint
