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

#include "cloudsel/config.hpp"

#include <cstdlib>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace cloudsel {

using nlohmann::json;

namespace {

std::array<double, 3> parse_levels(const json& j, const std::array<double, 3>& fallback) {
  std::array<double, 3> out = fallback;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto name = std::string(to_string(static_cast<VagueLevel>(i)));
    if (j.contains(name)) out[i] = j.at(name).get<double>();
    if (!(out[i] >= 0.0)) throw parse_error(fmt::format("vague level '{}' must be non-negative", name));
  }
  return out;
}

}  // namespace

EngineConfig parse_engine_config(std::string_view document) {
  EngineConfig cfg;
  try {
    const json j = json::parse(document);
    if (!j.is_object()) throw parse_error("engine config must be an object");
    cfg.host = j.value("host", cfg.host);
    cfg.port = j.value("port", cfg.port);
    cfg.catalog_path = j.value("catalog_path", cfg.catalog_path);
    cfg.history_path = j.value("history_path", cfg.history_path);
    cfg.history_compact_every = j.value("history_compact_every", cfg.history_compact_every);
    if (j.contains("compatibility_policy")) {
      const auto text = j.at("compatibility_policy").get<std::string>();
      auto policy = parse_policy(text);
      if (!policy) throw parse_error(fmt::format("unknown compatibility policy '{}'", text));
      cfg.policy = *policy;
    }
    if (j.contains("vague_levels")) {
      const json& v = j.at("vague_levels");
      if (v.contains("storage")) cfg.vague_mapping.storage = parse_levels(v.at("storage"), cfg.vague_mapping.storage);
      if (v.contains("compute")) cfg.vague_mapping.compute = parse_levels(v.at("compute"), cfg.vague_mapping.compute);
      if (v.contains("traffic")) cfg.vague_mapping.traffic = parse_levels(v.at("traffic"), cfg.vague_mapping.traffic);
    }
    if (j.contains("ga")) {
      const json& g = j.at("ga");
      cfg.ga.population_size = g.value("population_size", cfg.ga.population_size);
      cfg.ga.generations = g.value("generations", cfg.ga.generations);
      cfg.ga.crossover_rate = g.value("crossover_rate", cfg.ga.crossover_rate);
      cfg.ga.mutation_rate = g.value("mutation_rate", cfg.ga.mutation_rate);
      cfg.ga.tournament_size = g.value("tournament_size", cfg.ga.tournament_size);
      cfg.ga.seed = g.value("seed", cfg.ga.seed);
    }
    cfg.consistency_threshold = j.value("consistency_threshold", cfg.consistency_threshold);
    cfg.popularity_recommended_weight = j.value("popularity_recommended_weight", cfg.popularity_recommended_weight);
    cfg.result_limit = j.value("result_limit", cfg.result_limit);
  } catch (const json::exception& e) {
    throw parse_error(fmt::format("malformed engine config: {}", e.what()));
  }
  try {
    cfg.ga.validate();
  } catch (const bad_request& e) {
    throw parse_error(fmt::format("engine config: {}", e.what()));
  }
  return cfg;
}

EngineConfig load_engine_config(const std::string& path) { return parse_engine_config(read_text_file(path)); }

void apply_env_overrides(EngineConfig& config) {
  if (const char* port = std::getenv("CLOUDSEL_PORT")) {
    try {
      config.port = std::stoi(port);
    } catch (const std::exception&) {
      throw parse_error(fmt::format("CLOUDSEL_PORT '{}' is not a port number", port));
    }
  }
  if (const char* catalog = std::getenv("CLOUDSEL_CATALOG")) config.catalog_path = catalog;
  if (const char* history = std::getenv("CLOUDSEL_HISTORY")) config.history_path = history;
}

}  // namespace cloudsel
