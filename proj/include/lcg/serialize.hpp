// Copyright 2026 The lcg-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include <json.hpp>

#include "lcg/gbs.hpp"
#include "lcg/lcog_state.hpp"
#include "lcg/stellar.hpp"

namespace lcg {

using json = nlohmann::json;

inline constexpr const char* kSchema = "lcg-sim/1";

// Complex numbers are [re, im]; matrices are row-major nested arrays.
json state_to_json(const LcogState& s);
LcogState state_from_json(const json& j);
void save_state(const LcogState& s, const std::string& path);
LcogState load_state(const std::string& path);

// Unknown keys raise ConfigError naming the JSON pointer of the offending field.
CircuitSpec circuit_from_json(const json& j, const std::string& where = "/circuit");
json circuit_to_json(const CircuitSpec& spec);
CostSpec cost_from_json(const json& j, const std::string& where = "/cost");

json report_to_json(const OptimizationReport& r);
json reduce_report_to_json(const ReduceReport& r);

// Throws ConfigError unless j is an object whose keys are all in `allowed`.
void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed);

}  // namespace lcg
