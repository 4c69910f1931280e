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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// The Eigen oracle comes first: httplib pulls in <resolv.h>, whose _res macro clashes with Eigen.
#include "support/eigen_oracle.hpp"

#include <httplib.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cloudsel/ahp.hpp"
#include "cloudsel/cost_engine.hpp"
#include "cloudsel/errors.hpp"
#include "cloudsel/estimator.hpp"
#include "cloudsel/nsga2.hpp"
#include "cloudsel/recommend.hpp"
#include "cloudsel/service.hpp"
#include "support/oracles.hpp"

namespace cloudsel {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome survey_runtime() {
  const BatchWorkload w{8e11, 0.001, 120, 12};
  const double hours = estimate_batch_runtime(w);
  const double years = serial_runtime_years(w);
  const bool ok = std::abs(hours - 154.3) <= 0.1 && hours < 200.0 && years >= 20.0 && years <= 35.0;
  return {ok, fmt::format("runtime {:.4f} h (target 154.3 +/- 0.1, < 200), serial {:.2f} years (in [20, 35])",
                          hours, years)};
}

Outcome monthly_traffic() {
  const double gb = estimate_monthly_traffic({71'000'000, 784, 1});
  return {std::abs(gb - 53085.327) <= 0.001, fmt::format("{:.6f} GB (target 53085.327 +/- 0.001)", gb)};
}

Outcome price_performance() {
  CatalogData d = parse_catalog_document(read_text_file(testing::data_file("catalog_minimal.json")));
  const auto catalog = Catalog::create(d);
  const ComputeOffer* a = catalog->find_compute("alpha-vm");
  const ComputeOffer* b = catalog->find_compute("beta-vm");
  const double price_ratio = b->hourly_rate / a->hourly_rate;
  const double speed_ratio = b->relative_speed / a->relative_speed;

  RequirementSpec s;
  s.usage.vm_count = 1;
  s.components = {true, false, false};
  s.criteria = {CriterionSpec::natural(Criterion::CostPerWorkload)};
  HybridOptions o;
  o.policy = CompatibilityPolicy::None;
  const auto result = hybrid_recommend(*catalog, s, PairwiseMatrix(1), GAParams{}, o);
  if (result.ranked.size() != 2) return {false, fmt::format("expected 2 ranked offers, got {}", result.ranked.size())};
  const auto& first = result.ranked[0].priced.bundle;
  const auto& second = result.ranked[1].priced.bundle;
  const double ratio =
      first.criteria_values.at("cost_per_workload") / second.criteria_values.at("cost_per_workload");
  const bool ok = std::abs(price_ratio - 1.3) < 1e-12 && std::abs(speed_ratio - 2.0) < 1e-12 &&
                  *first.compute_id == "beta-vm" && std::abs(ratio - 0.65) <= 1e-9;
  return {ok, fmt::format("first {} (faster), per-workload cost ratio {:.12f} (target 0.65 +/- 1e-9)",
                          *first.compute_id, ratio)};
}

Outcome join_oracle() {
  std::mt19937_64 rng(2026);
  const std::array<CompatibilityPolicy, 3> policies = {CompatibilityPolicy::SameRegion,
                                                       CompatibilityPolicy::SameProvider, CompatibilityPolicy::None};
  int agree = 0;
  const int total = 500;
  for (int i = 0; i < total; ++i) {
    const testing::CatalogShape shape{testing::uniform_int(rng, 1, 5), testing::uniform_int(rng, 1, 10),
                                      testing::uniform_int(rng, 0, 50), testing::uniform_int(rng, 0, 50),
                                      testing::uniform_int(rng, 0, 50)};
    const CatalogData d = testing::random_catalog_data(rng, shape);
    const auto c = Catalog::create(d);
    RequirementSpec s;
    s.usage = {testing::uniform(rng, 0, 5000), testing::uniform(rng, 0, 500), testing::uniform(rng, 0, 5000), 1};
    if (testing::uniform_int(rng, 0, 1)) s.continents = {all_continents()[testing::uniform_int(rng, 0, 6)]};
    s.min_cores = testing::uniform_int(rng, 0, 8);
    s.min_memory = testing::uniform(rng, 0, 16);
    const auto r = resolve_requirements(s, VagueMapping{});
    const auto policy = policies[static_cast<std::size_t>(i) % policies.size()];
    std::set<std::string> got;
    for (const auto& b : bundle_join(*c, filter_candidates(*c, r), policy)) got.insert(b.key());
    if (got == testing::nested_loop_join(d, r, policy)) ++agree;
  }
  return {agree == total, fmt::format("{}/{} catalogs set-equal (target 100%)", agree, total)};
}

Outcome pareto_oracle() {
  std::mt19937_64 rng(4242);
  const std::vector<CriterionSpec> objectives = {CriterionSpec::natural(Criterion::TotalCost),
                                                 CriterionSpec::natural(Criterion::RelativeSpeed),
                                                 CriterionSpec::natural(Criterion::Memory)};
  int runs = 0, equal = 0, sound = 0, evolved = 0;
  while (runs < 100) {
    const int n = testing::uniform_int(rng, 2, 8);
    const int m = testing::uniform_int(rng, 1, 5);
    const int k = testing::uniform_int(rng, 1, 5);
    if (n * m * k > 200) continue;
    const auto catalog = Catalog::create(testing::random_catalog_data(rng, {2, 3, n, m, k}));
    RequirementSpec s;
    s.usage = {testing::uniform(rng, 0, 3000), testing::uniform(rng, 0, 500), testing::uniform(rng, 0, 3000), 1};
    const auto spec = resolve_requirements(s, VagueMapping{});
    const auto candidates = filter_candidates(*catalog, spec);
    const auto policy = runs % 2 ? CompatibilityPolicy::None : CompatibilityPolicy::SameProvider;

    std::vector<Bundle> all;
    for (const auto& b : bundle_join(*catalog, candidates, policy)) all.push_back(price_bundle(*catalog, b, spec).bundle);
    if (all.empty() || all.size() > 200) continue;
    ++runs;

    const ProblemInstance problem{*catalog, candidates, spec, policy, nullptr, 0.1};
    GAParams params;
    params.population_size = 40;
    params.generations = 100;
    params.seed = static_cast<std::uint64_t>(runs);
    const ParetoFront front = nsga2_run(problem, objectives, {}, params);
    if (candidates.compute.size() * candidates.storage.size() * candidates.transfer.size() > params.population_size)
      ++evolved;

    std::set<std::string> expected, got;
    for (const auto& b : brute_force_pareto(all, objectives)) expected.insert(b.key());
    bool all_sound = true;
    for (const auto& member : front.members) {
      const Bundle b = make_bundle(*catalog, candidates, decode_genome(candidates, member.genome));
      got.insert(b.key());
      const auto v = objective_vector(price_bundle(*catalog, b, spec).bundle, objectives);
      for (const auto& other : all) all_sound = all_sound && !pareto_dominates(objective_vector(other, objectives), v);
      all_sound = all_sound && member.feasible();
    }
    if (got == expected) ++equal;
    if (all_sound) ++sound;
  }
  return {equal >= 95 && sound == runs,
          fmt::format("{}/{} runs set-equal (target >= 95), {}/{} runs with every member non-dominated, "
                      "{} runs with a genome space larger than the population",
                      equal, runs, sound, runs, evolved)};
}

Outcome ahp_recovery() {
  std::mt19937_64 rng(7);
  int recovered = 0;
  double worst_error = 0.0, worst_cr = 0.0;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> w(static_cast<std::size_t>(testing::uniform_int(rng, 3, 7)));
    double sum = 0.0;
    for (double& x : w) sum += (x = testing::uniform(rng, 0.01, 1.0));
    for (double& x : w) x /= sum;
    const auto out = ahp_weights(PairwiseMatrix::from_weights(w));
    double err = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) err = std::max(err, std::abs(out.weights[j] - w[j]));
    worst_error = std::max(worst_error, err);
    worst_cr = std::max(worst_cr, out.consistency_ratio);
    if (err <= 1e-6 && out.consistency_ratio < 1e-6) ++recovered;
  }

  const std::vector<std::vector<double>> inconsistent = {{1, 2, 6}, {1.0 / 2, 1, 2}, {1.0 / 6, 1.0 / 2, 1}};
  const auto ours = ahp_weights(PairwiseMatrix(inconsistent));
  const auto oracle = testing::eigen_ahp(inconsistent);
  double diff = std::abs(ours.consistency_ratio - oracle.consistency_ratio);
  for (std::size_t j = 0; j < 3; ++j) diff = std::max(diff, std::abs(ours.weights[j] - oracle.weights[j]));
  const bool ok = recovered == 200 && ours.consistency_ratio > 0.0 && diff <= 1e-6;
  return {ok, fmt::format("{}/200 recovered (max weight error {:.2e}, max CR {:.2e}); inconsistent 3x3 CR {:.6f}, "
                          "max deviation from eigen solver {:.2e}",
                          recovered, worst_error, worst_cr, ours.consistency_ratio, diff)};
}

Outcome tiered_pricing() {
  std::mt19937_64 rng(1000);
  int oracle_ok = 0, quota_ok = 0, continuity_ok = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto tiers = testing::random_tiers(rng);
    const double quota = testing::uniform_int(rng, 0, 50);
    const double usage = testing::uniform_int(rng, 0, 5000);
    const double err = std::abs(tiered_cost(usage, tiers, quota) - testing::per_gb_cost(usage, tiers, quota));
    worst = std::max(worst, err);
    if (err <= 1e-9) ++oracle_ok;
    if (tiered_cost(testing::uniform(rng, 0, quota), tiers, quota) == 0.0) ++quota_ok;
    bool continuous = true;
    for (const auto& t : tiers) {
      if (t.lower == 0.0) continue;
      const double eps = 1e-7;
      continuous = continuous &&
                   std::abs(tiered_cost(t.lower - eps, tiers, 0) - tiered_cost(t.lower + eps, tiers, 0)) <= 1e-6;
    }
    if (continuous) ++continuity_ok;
  }
  return {oracle_ok == 1000 && quota_ok == 1000 && continuity_ok == 1000,
          fmt::format("oracle {}/1000 (max error {:.2e}), free quota {}/1000, boundary continuity {}/1000", oracle_ok,
                      worst, quota_ok, continuity_ok)};
}

Outcome rest_golden() {
  auto catalogs = std::make_shared<CatalogStore>(load_catalog_file(testing::data_file("catalog.json")));
  Service service(catalogs, std::make_shared<HistoryStore>(), EngineConfig{});
  HttpServer server(service);
  const int port = server.start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", port);

  const std::string url =
      "/api/cost/combined?media_type=xml&currency=AUD&storage=500&duration=31&data_upload_size=15"
      "&data_download_size=30&continent=North%20America,South%20America,Antarctica,Africa,Europe,Asia,Australia";
  auto res = client.Get(url);
  if (!res) return {false, "no response"};
  auto count = [](const std::string& body, const std::string& tag) {
    std::size_t n = 0;
    for (auto pos = body.find("<" + tag + ">"); pos != std::string::npos; pos = body.find("<" + tag + ">", pos + 1))
      ++n;
    return n;
  };
  const std::size_t services = count(res->body, "Combined_service");
  bool ok = res->status == 200 && res->body.rfind("<list>", 0) == 0 && services > 0 &&
            count(res->body, "name") == services && count(res->body, "website") == services &&
            count(res->body, "region_name") == services;
  std::string detail = fmt::format("golden request {} with {} <Combined_service> entries", res->status, services);

  const std::vector<std::pair<std::string, std::string>> mutations = {
      {"media_type", "csv"}, {"currency", "XYZ"},       {"storage", "-5"},          {"duration", "32"},
      {"data_upload_size", "-1"}, {"data_download_size", "abc"}, {"continent", "Atlantis"},
  };
  int named = 0;
  for (const auto& [param, value] : mutations) {
    const std::regex re(param + "=[^&]*");
    const std::string mutated = std::regex_replace(url, re, param + "=" + value, std::regex_constants::format_first_only);
    auto r = client.Get(mutated);
    if (r && r->status == 400 &&
        (r->body.find("<parameter>" + param + "</parameter>") != std::string::npos ||
         r->body.find("\"parameter\": \"" + param + "\"") != std::string::npos))
      ++named;
  }
  server.stop();
  ok = ok && named == static_cast<int>(mutations.size());
  return {ok, fmt::format("{}; {}/{} invalid parameters rejected with 400 naming the parameter", detail, named,
                          mutations.size())};
}

std::string capture(const std::string& command, int& status) {
  std::string out;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  status = ::pclose(pipe);
  return out;
}

Outcome cli_determinism() {
  const std::string cli = CLOUDSEL_CLI_PATH;
  const std::string catalog = testing::data_file("catalog.json");
  const std::string common = fmt::format(" --catalog '{}' --storage 500 --upload 15 --download 30 --seed 11", catalog);
  const std::vector<std::string> commands = {
      "'" + cli + "' recommend" + common + " --criteria total_cost,relative_speed,memory --comparisons 3,5,2",
      "'" + cli + "' pareto" + common,
  };
  int identical = 0;
  std::vector<std::size_t> sizes;
  for (const auto& c : commands) {
    int s1 = 0, s2 = 0;
    const std::string a = capture(c, s1);
    const std::string b = capture(c, s2);
    sizes.push_back(a.size());
    if (s1 == 0 && s2 == 0 && !a.empty() && a == b) ++identical;
  }
  return {identical == 2, fmt::format("{}/2 commands byte-identical (recommend {} bytes, pareto {} bytes)", identical,
                                      sizes[0], sizes[1])};
}

}  // namespace
}  // namespace cloudsel

int main() {
  using namespace cloudsel;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"batch-runtime", survey_runtime},        {"monthly-traffic", monthly_traffic},
      {"price-performance", price_performance}, {"join-oracle", join_oracle},
      {"pareto-oracle", pareto_oracle},         {"ahp-recovery", ahp_recovery},
      {"tiered-pricing", tiered_pricing},       {"rest-golden", rest_golden},
      {"cli-determinism", cli_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fmt::format("{} {:<18} {} [{:.2f}s]", o.pass ? "PASS" : "FAIL", name, o.detail, secs) << std::endl;
    if (!o.pass) ++failures;
  }
  std::cout << fmt::format("{}/{} criteria passed", criteria.size() - static_cast<std::size_t>(failures),
                           criteria.size())
            << std::endl;
  return failures == 0 ? 0 : 1;
}
