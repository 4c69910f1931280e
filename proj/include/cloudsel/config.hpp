// Copyright 2026 The cloudsel Authors
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

#ifndef CLOUDSEL_CONFIG_HPP
#define CLOUDSEL_CONFIG_HPP

#include <cstddef>
#include <string>
#include <string_view>

#include "cloudsel/ahp.hpp"
#include "cloudsel/matcher.hpp"
#include "cloudsel/nsga2.hpp"

namespace cloudsel {

/// Engine settings shared by the service and the CLI.
struct EngineConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::string catalog_path = "data/catalog.json";
  std::string history_path = "cloudsel-history.ndjson";
  std::size_t history_compact_every = 1000;
  CompatibilityPolicy policy = CompatibilityPolicy::SameRegion;
  VagueMapping vague_mapping;
  GAParams ga;
  double consistency_threshold = kDefaultConsistencyThreshold;
  double popularity_recommended_weight = 0.1;
  std::size_t result_limit = 20;
};

/// Missing keys keep their defaults. Throws parse_error.
EngineConfig parse_engine_config(std::string_view document);
EngineConfig load_engine_config(const std::string& path);

/// CLOUDSEL_PORT, CLOUDSEL_CATALOG and CLOUDSEL_HISTORY override the file.
void apply_env_overrides(EngineConfig& config);

}  // namespace cloudsel

#endif  // CLOUDSEL_CONFIG_HPP
