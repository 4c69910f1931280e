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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cloudsel/catalog.hpp"
#include "cloudsel/config.hpp"
#include "cloudsel/cost_engine.hpp"
#include "cloudsel/errors.hpp"
#include "cloudsel/estimator.hpp"
#include "cloudsel/history.hpp"
#include "cloudsel/nsga2.hpp"
#include "cloudsel/recommend.hpp"
#include "cloudsel/service.hpp"

namespace cloudsel::cli {

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const std::size_t pos = std::min(item.find(',', start), item.size());
      if (pos > start) out.push_back(item.substr(start, pos - start));
      start = pos + 1;
    }
  }
  return out;
}

struct EngineFlags {
  std::string config_path;
  std::string catalog_path;

  void add(CLI::App& app) {
    app.add_option("--config", config_path, "Engine configuration file (JSON)");
    app.add_option("--catalog", catalog_path, "Catalog file (JSON); overrides the configuration");
  }

  EngineConfig config() const {
    EngineConfig cfg = config_path.empty() ? EngineConfig{} : load_engine_config(config_path);
    if (!catalog_path.empty()) cfg.catalog_path = catalog_path;
    return cfg;
  }
};

struct RequirementFlags {
  std::optional<double> storage, upload, download;
  std::optional<int> vm_count;
  int duration = kDaysPerBillingMonth;
  double vm_hours = 24.0;
  std::string currency;
  std::vector<std::string> continents;
  std::string os_family;
  int min_cores = 0;
  double min_memory = 0.0;
  std::string storage_level, compute_level, traffic_level;
  std::vector<std::string> components;
  std::string policy;

  void add(CLI::App& app) {
    app.add_option("--storage", storage, "Storage in GB")->check(CLI::NonNegativeNumber);
    app.add_option("--upload", upload, "Monthly upload in GB")->check(CLI::NonNegativeNumber);
    app.add_option("--download", download, "Monthly download in GB")->check(CLI::NonNegativeNumber);
    app.add_option("--duration", duration, "Days of use within the month")->check(CLI::Range(1, 31));
    app.add_option("--vm-count", vm_count, "Number of VMs")->check(CLI::NonNegativeNumber);
    app.add_option("--vm-hours", vm_hours, "VM hours per day")->check(CLI::Range(0.0, 24.0));
    app.add_option("--currency", currency, "Currency code (default: catalog base)");
    app.add_option("--continent", continents, "Continent filter, comma separated")->delimiter(',');
    app.add_option("--os", os_family, "Operating system family");
    app.add_option("--min-cores", min_cores, "Minimum cores per VM")->check(CLI::NonNegativeNumber);
    app.add_option("--min-memory", min_memory, "Minimum memory per VM in GB")->check(CLI::NonNegativeNumber);
    app.add_option("--storage-level", storage_level, "Vague storage level")
        ->check(CLI::IsMember({"small", "medium", "large"}));
    app.add_option("--compute-level", compute_level, "Vague compute level")
        ->check(CLI::IsMember({"small", "medium", "large"}));
    app.add_option("--traffic-level", traffic_level, "Vague traffic level")
        ->check(CLI::IsMember({"small", "medium", "large"}));
    app.add_option("--components", components, "Bundle components (compute,storage,transfer)")
        ->delimiter(',')
        ->check(CLI::IsMember({"compute", "storage", "transfer"}));
    app.add_option("--policy", policy, "Compatibility policy")
        ->check(CLI::IsMember({"same-region", "same-provider", "none"}));
  }

  RequirementSpec spec(const Catalog& catalog) const {
    RequirementSpec s;
    s.usage.storage = storage;
    s.usage.data_upload = upload;
    s.usage.data_download = download;
    s.usage.vm_count = vm_count;
    s.usage.duration_days = duration;
    s.usage.vm_hours_per_day = vm_hours;
    s.currency = currency.empty() ? catalog.currency_table().base_code : currency;
    for (const auto& name : continents) {
      auto c = parse_continent(name);
      if (!c) throw bad_request("continent", fmt::format("unknown continent '{}'", name));
      s.continents.push_back(*c);
    }
    if (!os_family.empty()) s.os_family = os_family;
    s.min_cores = min_cores;
    s.min_memory = min_memory;
    if (!storage_level.empty()) s.vague_levels[Dimension::Storage] = *parse_vague_level(storage_level);
    if (!compute_level.empty()) s.vague_levels[Dimension::Compute] = *parse_vague_level(compute_level);
    if (!traffic_level.empty()) s.vague_levels[Dimension::Traffic] = *parse_vague_level(traffic_level);
    if (!vm_count && compute_level.empty()) s.usage.vm_count = 1;
    if (!components.empty()) {
      s.components = {false, false, false};
      for (const auto& c : components) {
        if (c == "compute") s.components.compute = true;
        if (c == "storage") s.components.storage = true;
        if (c == "transfer") s.components.transfer = true;
      }
    }
    return s;
  }

  CompatibilityPolicy resolved_policy(const EngineConfig& cfg) const {
    return policy.empty() ? cfg.policy : *parse_policy(policy);
  }
};

struct SearchFlags {
  std::vector<std::string> criteria;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> generations, population;

  void add(CLI::App& app, const std::string& default_criteria) {
    app.add_option("--criteria", criteria, "Criteria as name or name:min|max, comma separated")
        ->delimiter(',')
        ->default_str(default_criteria);
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--generations", generations, "GA generations");
    app.add_option("--population", population, "GA population size")->check(CLI::Range(2, 100000));
  }

  std::vector<CriterionSpec> parsed(const std::string& fallback) const {
    std::vector<std::string> items = criteria.empty() ? split_list({fallback}) : criteria;
    std::vector<CriterionSpec> out;
    for (const auto& item : items) {
      const auto colon = item.find(':');
      auto c = parse_criterion(item.substr(0, colon));
      if (!c) throw bad_request("criteria", fmt::format("unknown criterion '{}'", item));
      CriterionSpec spec = CriterionSpec::natural(*c);
      if (colon != std::string::npos) {
        auto d = parse_direction(item.substr(colon + 1));
        if (!d) throw bad_request("criteria", fmt::format("unknown direction in '{}'", item));
        spec.direction = *d;
      }
      out.push_back(spec);
    }
    return out;
  }

  GAParams params(const EngineConfig& cfg) const {
    GAParams p = cfg.ga;
    if (seed) p.seed = *seed;
    if (generations) p.generations = *generations;
    if (population) p.population_size = *population;
    p.validate();
    return p;
  }
};

std::vector<double> parse_judgments(const std::vector<std::string>& items) {
  std::vector<double> values;
  for (const auto& item : items) {
    const auto slash = item.find('/');
    try {
      std::size_t used = 0;
      double v = 0.0;
      if (slash == std::string::npos) {
        v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const std::string num = item.substr(0, slash), den = item.substr(slash + 1);
        std::size_t used_den = 0;
        v = std::stod(num, &used) / std::stod(den, &used_den);
        if (used != num.size() || used_den != den.size()) throw std::invalid_argument(item);
      }
      if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(item);
      values.push_back(v);
    } catch (const std::logic_error&) {
      throw bad_request("comparisons", fmt::format("'{}' is not a positive judgment", item));
    }
  }
  return values;
}

void print_breakdown_header(std::ostream& out) {
  fmt::print(out, "{:>4}  {:>14}  {:>12}  {:>12}  {:>12}  {:>12}  {:>12}  {:<3}  {}  [{}]\n", "#", "total",
             "compute", "storage", "transfer_in", "transfer_out", "promotion", "cur", "name", "bundle");
}

void print_breakdown_row(std::ostream& out, std::size_t rank, const Catalog& catalog, const PricedBundle& p) {
  const ResultEntry e = make_result_entry(catalog, p, std::nullopt);
  const CostBreakdown& c = p.cost;
  fmt::print(out, "{:>4}  {:>14.4f}  {:>12.4f}  {:>12.4f}  {:>12.4f}  {:>12.4f}  {:>12.4f}  {:<3}  {}  [{}]\n",
             rank, c.total, c.compute, c.storage, c.transfer_in, c.transfer_out, c.promotion_adjustment,
             c.currency, e.name, p.bundle.key());
}

int cmd_validate(const EngineFlags& engine, std::ostream& out) {
  const EngineConfig cfg = engine.config();
  const CatalogData data = parse_catalog_document(read_text_file(cfg.catalog_path));
  const std::vector<Violation> violations = validate_catalog(data);
  for (const auto& v : violations) out << v.to_string() << '\n';
  if (!violations.empty()) return kExitDomain;
  fmt::print(out, "ok: {} providers, {} regions, {} offers\n", data.providers.size(), data.regions.size(),
             data.compute_offers.size() + data.storage_offers.size() + data.transfer_offers.size());
  return kExitOk;
}

int cmd_quote(const EngineFlags& engine, const RequirementFlags& req, const std::string& bundle_key,
              std::size_t limit, std::ostream& out) {
  const EngineConfig cfg = engine.config();
  const CatalogSnapshot catalog = load_catalog_file(cfg.catalog_path);
  const ResolvedRequirements resolved = resolve_requirements(req.spec(*catalog), cfg.vague_mapping);
  catalog->currency_table().rate(resolved.currency);
  const CandidateSets candidates = filter_candidates(*catalog, resolved);
  std::vector<PricedBundle> priced;
  for (auto& b : bundle_join(*catalog, candidates, req.resolved_policy(cfg))) {
    if (!bundle_key.empty() && b.key() != bundle_key) continue;
    priced.push_back(price_bundle(*catalog, std::move(b), resolved));
  }
  sort_by_total(priced);
  if (!bundle_key.empty() && priced.empty())
    throw bad_request("bundle", fmt::format("bundle '{}' is not among the matching bundles", bundle_key));
  print_breakdown_header(out);
  for (std::size_t i = 0; i < priced.size() && i < limit; ++i) print_breakdown_row(out, i + 1, *catalog, priced[i]);
  return kExitOk;
}

int cmd_recommend(const EngineFlags& engine, const RequirementFlags& req, const SearchFlags& search,
                  const std::vector<std::string>& comparisons, std::optional<double> budget,
                  const std::string& history_path, std::size_t limit, std::ostream& out) {
  const EngineConfig cfg = engine.config();
  const CatalogSnapshot catalog = load_catalog_file(cfg.catalog_path);
  RequirementSpec spec = req.spec(*catalog);
  spec.criteria = search.parsed("total_cost");
  const std::size_t n = spec.criteria.size();
  std::optional<PairwiseMatrix> matrix;
  if (comparisons.empty()) {
    matrix.emplace(n);
  } else {
    try {
      matrix = PairwiseMatrix::from_upper_triangle(n, parse_judgments(comparisons));
    } catch (const invariant_error& e) {
      throw bad_request("comparisons", e.what());
    }
  }
  std::optional<PopularityStats> popularity;
  if (!history_path.empty()) popularity = HistoryStore(history_path).popularity();

  HybridOptions options;
  options.policy = req.resolved_policy(cfg);
  options.vague_mapping = cfg.vague_mapping;
  options.consistency_threshold = cfg.consistency_threshold;
  options.limit = limit;
  options.penalties.budget_cap = budget;
  options.popularity = popularity ? &*popularity : nullptr;
  options.recommended_weight = cfg.popularity_recommended_weight;
  const GAParams params = search.params(cfg);
  const HybridResult result = hybrid_recommend(*catalog, spec, *matrix, params, options);

  fmt::print(out, "criteria:");
  for (std::size_t k = 0; k < n; ++k)
    fmt::print(out, " {}:{}={:.6f}", result.weights.names[k], to_string(spec.criteria[k].direction),
               result.weights.weights[k]);
  fmt::print(out, "\nconsistency_ratio: {:.6f}\nseed: {}\nevaluations: {}\n", result.weights.consistency_ratio,
             params.seed, result.evaluations);
  fmt::print(out, "{:>4}  {:>8}  {:>14}  {:<3}  {}  [{}]\n", "#", "score", "total", "cur", "name", "bundle");
  std::size_t rank = 0;
  for (const auto& r : result.ranked) {
    const ResultEntry e = make_result_entry(*catalog, r.priced, r.score);
    fmt::print(out, "{:>4}  {:>8.6f}  {:>14.4f}  {:<3}  {}  [{}]\n", ++rank, r.score, r.priced.cost.total,
               r.priced.cost.currency, e.name, r.priced.bundle.key());
  }
  return kExitOk;
}

int cmd_pareto(const EngineFlags& engine, const RequirementFlags& req, const SearchFlags& search, bool exact,
               const std::string& plot_path, std::ostream& out) {
  const EngineConfig cfg = engine.config();
  const CatalogSnapshot catalog = load_catalog_file(cfg.catalog_path);
  RequirementSpec spec = req.spec(*catalog);
  spec.criteria = search.parsed("total_cost,relative_speed");
  const ResolvedRequirements resolved = resolve_requirements(spec, cfg.vague_mapping);
  catalog->currency_table().rate(resolved.currency);
  const CandidateSets candidates = filter_candidates(*catalog, resolved);
  const CompatibilityPolicy policy = req.resolved_policy(cfg);

  std::vector<PricedBundle> front;
  if (exact) {
    std::vector<Bundle> all;
    for (auto& b : bundle_join(*catalog, candidates, policy))
      all.push_back(price_bundle(*catalog, std::move(b), resolved).bundle);
    for (auto& b : brute_force_pareto(all, resolved.criteria))
      front.push_back(price_bundle(*catalog, std::move(b), resolved));
  } else {
    const ProblemInstance problem{catalog.operator*(), candidates, resolved, policy, nullptr,
                                  cfg.popularity_recommended_weight};
    const ParetoFront result = nsga2_run(problem, resolved.criteria, PenaltyConfig{}, search.params(cfg));
    for (const auto& m : result.members) {
      if (!m.feasible()) continue;
      Bundle b = make_bundle(*catalog, candidates, decode_genome(candidates, m.genome));
      front.push_back(price_bundle(*catalog, std::move(b), resolved));
    }
  }
  std::sort(front.begin(), front.end(), [&](const PricedBundle& a, const PricedBundle& b) {
    const auto va = objective_vector(a.bundle, resolved.criteria);
    const auto vb = objective_vector(b.bundle, resolved.criteria);
    if (va != vb) return va < vb;
    return a.bundle.key() < b.bundle.key();
  });

  fmt::print(out, "{:>4}", "#");
  for (const auto& c : resolved.criteria) fmt::print(out, "  {:>16}", c.name());
  fmt::print(out, "  {}  [{}]\n", "name", "bundle");
  std::size_t rank = 0;
  for (const auto& p : front) {
    fmt::print(out, "{:>4}", ++rank);
    for (const auto& c : resolved.criteria) fmt::print(out, "  {:>16.6f}", p.bundle.criteria_values.at(c.name()));
    fmt::print(out, "  {}  [{}]\n", make_result_entry(*catalog, p, std::nullopt).name, p.bundle.key());
  }

  if (!plot_path.empty()) {
    std::ofstream csv(plot_path, std::ios::trunc);
    if (!csv) throw error(fmt::format("cannot write {}", plot_path));
    csv << "bundle";
    for (const auto& c : resolved.criteria) csv << ',' << c.name();
    csv << '\n';
    for (const auto& p : front) {
      csv << p.bundle.key();
      for (const auto& c : resolved.criteria) csv << ',' << fmt::format("{}", p.bundle.criteria_values.at(c.name()));
      csv << '\n';
    }
  }
  return kExitOk;
}

struct EstimateFlags {
  std::optional<double> tasks, per_task_ms, deadline;
  std::int64_t vms = 1, threads = 1;
  std::optional<double> visitors, page_kib;
  double pages = 1.0;
};

int cmd_estimate(const EstimateFlags& f, std::ostream& out) {
  bool any = false;
  if (f.tasks || f.per_task_ms) {
    if (!f.tasks || !f.per_task_ms) throw bad_request("tasks", "--tasks and --per-task-ms go together");
    BatchWorkload w{*f.tasks, *f.per_task_ms / 1000.0, f.vms, f.threads};
    fmt::print(out, "runtime: {:.1f} hours on {} VMs x {} threads\n", estimate_batch_runtime(w), f.vms, f.threads);
    fmt::print(out, "serial: {:.1f} years\n", serial_runtime_years(w));
    if (f.deadline)
      fmt::print(out, "workers for {} hours: {}\n", *f.deadline, required_parallelism(w, *f.deadline));
    any = true;
  }
  if (f.visitors || f.page_kib) {
    if (!f.visitors || !f.page_kib) throw bad_request("visitors", "--visitors and --page-kib go together");
    const double gb = estimate_monthly_traffic({*f.visitors, *f.page_kib, f.pages});
    fmt::print(out, "traffic: {:.3f} GB per month\n", gb);
    any = true;
  }
  if (!any) throw bad_request("estimate", "give a batch workload (--tasks) or a traffic workload (--visitors)");
  return kExitOk;
}

int cmd_history(const std::string& path, const std::vector<std::string>& offer_ids, bool compact,
                std::ostream& out) {
  HistoryStore store(path);
  if (compact) store.compact();
  const PopularityStats stats = store.popularity(offer_ids);
  fmt::print(out, "{:<24}  {:>11}  {:>8}\n", "offer", "recommended", "selected");
  for (const auto& [id, c] : stats) fmt::print(out, "{:<24}  {:>11}  {:>8}\n", id, c.recommended, c.selected);
  return kExitOk;
}

int cmd_serve(const EngineFlags& engine, const std::string& host, std::optional<int> port,
              const std::string& history_path, std::ostream& err) {
  EngineConfig cfg = engine.config();
  apply_env_overrides(cfg);
  if (!engine.catalog_path.empty()) cfg.catalog_path = engine.catalog_path;
  if (!host.empty()) cfg.host = host;
  if (port) cfg.port = *port;
  if (!history_path.empty()) cfg.history_path = history_path;

  auto catalogs = std::make_shared<CatalogStore>(load_catalog_file(cfg.catalog_path));
  auto history = std::make_shared<HistoryStore>(cfg.history_path, cfg.history_compact_every);
  Service service(catalogs, history, cfg);
  HttpServer server(service);
  fmt::print(err, "serving {} on {}:{}\n", cfg.catalog_path, cfg.host, cfg.port);
  err.flush();
  server.listen(cfg.host, cfg.port);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cloud service bundle selection"};
  app.name("cloudsel");
  app.require_subcommand(1);

  EngineFlags engine;
  RequirementFlags req;
  SearchFlags search;

  auto* validate = app.add_subcommand("validate", "Check a catalog and print violations");
  engine.add(*validate);

  std::string bundle_key;
  std::size_t limit = 20;
  auto* quote = app.add_subcommand("quote", "Cost breakdown of matching bundles, cheapest first");
  engine.add(*quote);
  req.add(*quote);
  quote->add_option("--bundle", bundle_key, "Only this bundle key (compute|storage|transfer)");
  quote->add_option("--limit", limit, "Rows to print")->check(CLI::PositiveNumber);

  std::vector<std::string> comparisons;
  std::optional<double> budget;
  std::string history_path;
  auto* recommend = app.add_subcommand("recommend", "AHP-weighted ranking of bundles");
  engine.add(*recommend);
  req.add(*recommend);
  search.add(*recommend, "total_cost");
  recommend->add_option("--comparisons", comparisons, "Upper triangle of the pairwise matrix, row major")
      ->delimiter(',');
  recommend->add_option("--budget", budget, "Budget cap on the total")->check(CLI::NonNegativeNumber);
  recommend->add_option("--history", history_path, "Selection log used for the popularity criterion");
  recommend->add_option("--limit", limit, "Rows to print")->check(CLI::PositiveNumber);

  bool exact = false;
  std::string plot_path;
  auto* pareto = app.add_subcommand("pareto", "Pareto front of matching bundles");
  engine.add(*pareto);
  req.add(*pareto);
  search.add(*pareto, "total_cost,relative_speed");
  pareto->add_flag("--exact", exact, "Enumerate every bundle instead of searching");
  pareto->add_option("--plot", plot_path, "Write the front as CSV for plotting");

  EstimateFlags est;
  auto* estimate = app.add_subcommand("estimate", "Batch runtime and web traffic estimates");
  estimate->add_option("--tasks", est.tasks, "Number of independent tasks")->check(CLI::PositiveNumber);
  estimate->add_option("--per-task-ms", est.per_task_ms, "Milliseconds per task")->check(CLI::PositiveNumber);
  estimate->add_option("--vms", est.vms, "VM count")->check(CLI::PositiveNumber);
  estimate->add_option("--threads", est.threads, "Threads per VM")->check(CLI::PositiveNumber);
  estimate->add_option("--deadline", est.deadline, "Deadline in hours")->check(CLI::PositiveNumber);
  estimate->add_option("--visitors", est.visitors, "Monthly visitors")->check(CLI::NonNegativeNumber);
  estimate->add_option("--page-kib", est.page_kib, "Page size in KiB")->check(CLI::NonNegativeNumber);
  estimate->add_option("--pages", est.pages, "Pages per visitor")->check(CLI::NonNegativeNumber);

  std::vector<std::string> offer_ids;
  bool compact = false;
  std::string log_path;
  auto* history = app.add_subcommand("history", "Popularity counts from a selection log");
  history->add_option("--log", log_path, "Selection log (NDJSON)")->required();
  history->add_option("--offer-ids", offer_ids, "Only these offers")->delimiter(',');
  history->add_flag("--compact", compact, "Fold the log into its snapshot first");

  std::string host;
  std::optional<int> port;
  auto* serve = app.add_subcommand("serve", "Run the REST service");
  engine.add(*serve);
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "Listen port")->check(CLI::Range(0, 65535));
  serve->add_option("--history", history_path, "Selection log path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(engine, out);
    if (*quote) return cmd_quote(engine, req, bundle_key, limit, out);
    if (*recommend)
      return cmd_recommend(engine, req, search, comparisons, budget, history_path, limit, out);
    if (*pareto) return cmd_pareto(engine, req, search, exact, plot_path, out);
    if (*estimate) return cmd_estimate(est, out);
    if (*history) return cmd_history(log_path, offer_ids, compact, out);
    if (*serve) return cmd_serve(engine, host, port, history_path, err);
  } catch (const bad_request& e) {
    fmt::print(err, "error: {}: {}\n", e.parameter(), e.what());
    return kExitUsage;
  } catch (const validation_error& e) {
    for (const auto& v : e.violations()) err << v.to_string() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace cloudsel::cli
