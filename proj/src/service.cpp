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

#include "cloudsel/service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cloudsel/recommend.hpp"

namespace cloudsel {

using nlohmann::json;

namespace {

constexpr std::string_view kXml = "application/xml";
constexpr std::string_view kJson = "application/json";

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    std::string_view part = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    parts.emplace_back(part);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> to_double(std::string_view text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> to_integer(std::string_view text) {
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

const std::string* find(const QueryParams& params, std::string_view name) {
  auto it = params.find(name);
  return it == params.end() ? nullptr : &it->second;
}

double non_negative(const std::string& text, const char* name) {
  auto v = to_double(text);
  if (!v || *v < 0.0) throw bad_request(name, fmt::format("'{}' must be a non-negative number, got '{}'", name, text));
  return *v;
}

long long integer_in(const std::string& text, const char* name, long long lo, long long hi) {
  auto v = to_integer(text);
  if (!v || *v < lo || *v > hi)
    throw bad_request(name, fmt::format("'{}' must be an integer in [{}, {}], got '{}'", name, lo, hi, text));
  return *v;
}

/// Accepts plain numbers and fractions such as "1/3".
std::optional<double> judgment(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return to_double(text);
  auto num = to_double(text.substr(0, slash));
  auto den = to_double(text.substr(slash + 1));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

bool is_numeric_field(std::string_view name) {
  static constexpr std::string_view kNumeric[] = {"total_cost",       "compute_cost",         "storage_cost",
                                                  "transfer_in_cost", "transfer_out_cost",    "promotion_adjustment",
                                                  "score"};
  return std::find(std::begin(kNumeric), std::end(kNumeric), name) != std::end(kNumeric);
}

std::string number(double v) { return fmt::format("{}", v); }

HttpResponse error_response(int status, MediaType media, std::string_view parameter, std::string_view message) {
  HttpResponse r;
  r.status = status;
  if (media == MediaType::Xml) {
    r.content_type = std::string(kXml);
    r.body = fmt::format("<error>\n  <status>{}</status>\n  <parameter>{}</parameter>\n  <message>{}</message>\n</error>\n",
                         status, xml_escape(parameter), xml_escape(message));
  } else {
    r.content_type = std::string(kJson);
    r.body = json{{"status", status}, {"parameter", parameter}, {"message", message}}.dump(2) + "\n";
  }
  return r;
}

HttpResponse json_response(int status, const json& body) {
  return {status, std::string(kJson), body.dump(2) + "\n"};
}

}  // namespace

CombinedCostRequest parse_combined_cost_request(const QueryParams& params, const EngineConfig& config) {
  CombinedCostRequest req;
  req.policy = config.policy;
  req.limit = config.result_limit;
  req.ga = config.ga;
  RequirementSpec& spec = req.spec;
  spec.currency.clear();

  if (const auto* v = find(params, "media_type")) {
    if (*v == "json") req.media_type = MediaType::Json;
    else if (*v == "xml") req.media_type = MediaType::Xml;
    else throw bad_request("media_type", fmt::format("'media_type' must be json or xml, got '{}'", *v));
  }
  if (const auto* v = find(params, "currency")) {
    const bool code = v->size() == 3 && std::all_of(v->begin(), v->end(), [](char c) { return c >= 'A' && c <= 'Z'; });
    if (!code) throw bad_request("currency", fmt::format("'currency' must be a 3-letter code, got '{}'", *v));
    spec.currency = *v;
  }
  if (const auto* v = find(params, "storage")) spec.usage.storage = non_negative(*v, "storage");
  if (const auto* v = find(params, "duration"))
    spec.usage.duration_days = static_cast<int>(integer_in(*v, "duration", 1, kDaysPerBillingMonth));
  if (const auto* v = find(params, "data_upload_size")) spec.usage.data_upload = non_negative(*v, "data_upload_size");
  if (const auto* v = find(params, "data_download_size"))
    spec.usage.data_download = non_negative(*v, "data_download_size");
  if (const auto* v = find(params, "continent"); v && !v->empty()) {
    for (const auto& name : split(*v, ',')) {
      auto c = parse_continent(name);
      if (!c) throw bad_request("continent", fmt::format("unknown continent '{}'", name));
      if (std::find(spec.continents.begin(), spec.continents.end(), *c) == spec.continents.end())
        spec.continents.push_back(*c);
    }
  }

  // Extensions.
  for (const char* dim : {"storage", "compute", "traffic"}) {
    const std::string param = std::string(dim) + "_level";
    if (const auto* v = find(params, param)) {
      auto level = parse_vague_level(*v);
      if (!level) throw bad_request(param, fmt::format("'{}' must be small, medium or large", param));
      spec.vague_levels[*parse_dimension(dim)] = *level;
    }
  }
  if (const auto* v = find(params, "vm_count"))
    spec.usage.vm_count = static_cast<int>(integer_in(*v, "vm_count", 0, 1'000'000));
  else if (!spec.vague_levels.count(Dimension::Compute))
    spec.usage.vm_count = 1;
  if (const auto* v = find(params, "vm_hours_per_day")) {
    auto h = to_double(*v);
    if (!h || *h <= 0.0 || *h > 24.0) throw bad_request("vm_hours_per_day", "'vm_hours_per_day' must lie in (0, 24]");
    spec.usage.vm_hours_per_day = *h;
  }
  if (const auto* v = find(params, "min_cores"))
    spec.min_cores = static_cast<int>(integer_in(*v, "min_cores", 0, 1'000'000));
  if (const auto* v = find(params, "min_memory")) spec.min_memory = non_negative(*v, "min_memory");
  if (const auto* v = find(params, "os_family"); v && !v->empty()) spec.os_family = *v;
  if (const auto* v = find(params, "policy")) {
    auto p = parse_policy(*v);
    if (!p) throw bad_request("policy", "'policy' must be same-region, same-provider or none");
    req.policy = *p;
  }
  if (const auto* v = find(params, "limit")) req.limit = static_cast<std::size_t>(integer_in(*v, "limit", 1, 10'000));
  if (const auto* v = find(params, "components")) {
    spec.components = {false, false, false};
    for (const auto& name : split(*v, ',')) {
      if (name == "compute") spec.components.compute = true;
      else if (name == "storage") spec.components.storage = true;
      else if (name == "transfer") spec.components.transfer = true;
      else throw bad_request("components", fmt::format("unknown component '{}'", name));
    }
  }
  if (const auto* v = find(params, "criteria"); v && !v->empty()) {
    for (const auto& item : split(*v, ',')) {
      const auto colon = item.find(':');
      auto criterion = parse_criterion(item.substr(0, colon));
      if (!criterion) throw bad_request("criteria", fmt::format("unknown criterion '{}'", item));
      CriterionSpec cs = CriterionSpec::natural(*criterion);
      if (colon != std::string::npos) {
        auto dir = parse_direction(item.substr(colon + 1));
        if (!dir) throw bad_request("criteria", fmt::format("unknown direction in '{}'", item));
        cs.direction = *dir;
      }
      spec.criteria.push_back(cs);
    }
  }
  if (const auto* v = find(params, "comparisons"); v && !v->empty()) {
    std::vector<double> values;
    for (const auto& item : split(*v, ',')) {
      auto x = judgment(item);
      if (!x || *x <= 0.0) throw bad_request("comparisons", fmt::format("'{}' is not a positive judgment", item));
      values.push_back(*x);
    }
    req.comparisons = std::move(values);
  }
  if (const auto* v = find(params, "seed"))
    req.ga.seed = static_cast<std::uint64_t>(integer_in(*v, "seed", 0, std::numeric_limits<long long>::max()));
  if (const auto* v = find(params, "generations"))
    req.ga.generations = static_cast<std::size_t>(integer_in(*v, "generations", 0, 100'000));
  if (const auto* v = find(params, "population"))
    req.ga.population_size = static_cast<std::size_t>(integer_in(*v, "population", 2, 100'000));
  if (const auto* v = find(params, "session"); v && !v->empty()) req.session = *v;
  return req;
}

ResultEntry make_result_entry(const Catalog& catalog, const PricedBundle& priced, std::optional<double> score) {
  const Bundle& b = priced.bundle;
  ResultEntry e;
  std::vector<std::string> names;
  for (const auto& id : b.offer_ids()) names.push_back(catalog.offer_name(id));
  e.name = fmt::format("{}", fmt::join(names, " + "));
  if (!b.region_ids.empty()) {
    const Region& region = catalog.region(b.region_ids.front());
    const Provider& provider = catalog.provider(region.provider_id);
    e.website = provider.website;
    e.region_name = region.region_name;
    e.provider = provider.name;
  }
  e.compute_id = b.compute_id;
  e.storage_id = b.storage_id;
  e.transfer_id = b.transfer_id;
  e.cost = priced.cost;
  e.score = score;
  return e;
}

std::vector<std::pair<std::string, std::string>> entry_fields(const ResultEntry& e) {
  std::vector<std::pair<std::string, std::string>> f = {
      {"name", e.name}, {"website", e.website}, {"region_name", e.region_name}, {"provider", e.provider}};
  if (e.compute_id) f.emplace_back("compute_id", *e.compute_id);
  if (e.storage_id) f.emplace_back("storage_id", *e.storage_id);
  if (e.transfer_id) f.emplace_back("transfer_id", *e.transfer_id);
  f.emplace_back("total_cost", number(e.cost.total));
  f.emplace_back("currency", e.cost.currency);
  f.emplace_back("compute_cost", number(e.cost.compute));
  f.emplace_back("storage_cost", number(e.cost.storage));
  f.emplace_back("transfer_in_cost", number(e.cost.transfer_in));
  f.emplace_back("transfer_out_cost", number(e.cost.transfer_out));
  f.emplace_back("promotion_adjustment", number(e.cost.promotion_adjustment));
  if (e.score) f.emplace_back("score", number(*e.score));
  return f;
}

std::string render_xml(const std::vector<ResultEntry>& entries) {
  std::string out = "<list>\n";
  for (const auto& e : entries) {
    out += "<Combined_service>\n";
    for (const auto& [k, v] : entry_fields(e)) out += fmt::format("  <{0}>{1}</{0}>\n", k, xml_escape(v));
    out += "</Combined_service>\n";
  }
  out += "</list>\n";
  return out;
}

std::string render_json(const std::vector<ResultEntry>& entries) {
  json list = json::array();
  for (const auto& e : entries) {
    json obj = json::object();
    for (const auto& [k, v] : entry_fields(e)) {
      if (is_numeric_field(k)) obj[k] = std::strtod(v.c_str(), nullptr);
      else obj[k] = v;
    }
    list.push_back(std::move(obj));
  }
  return json{{"list", std::move(list)}}.dump(2) + "\n";
}

Service::Service(std::shared_ptr<CatalogStore> catalogs, std::shared_ptr<HistoryStore> history, EngineConfig config,
                 Clock clock)
    : catalogs_(std::move(catalogs)), history_(std::move(history)), config_(std::move(config)), clock_(std::move(clock)) {}

std::vector<ResultEntry> Service::rank(const Catalog& catalog, const CombinedCostRequest& request) const {
  std::vector<ResultEntry> entries;
  const RequirementSpec& spec = request.spec;

  if (spec.criteria.empty()) {
    const ResolvedRequirements resolved = resolve_requirements(spec, config_.vague_mapping);
    catalog.currency_table().rate(resolved.currency);
    const CandidateSets candidates = filter_candidates(catalog, resolved);
    std::vector<PricedBundle> priced;
    for (auto& b : bundle_join(catalog, candidates, request.policy))
      priced.push_back(price_bundle(catalog, std::move(b), resolved));
    sort_by_total(priced);
    if (priced.size() > request.limit) priced.resize(request.limit);
    for (const auto& p : priced) entries.push_back(make_result_entry(catalog, p, std::nullopt));
    return entries;
  }

  const std::size_t n = spec.criteria.size();
  std::optional<PairwiseMatrix> matrix;
  try {
    matrix = request.comparisons ? PairwiseMatrix::from_upper_triangle(n, *request.comparisons) : PairwiseMatrix(n);
  } catch (const invariant_error& e) {
    throw bad_request("comparisons", e.what());
  }
  const PopularityStats popularity = history_->popularity();
  HybridOptions options;
  options.policy = request.policy;
  options.vague_mapping = config_.vague_mapping;
  options.consistency_threshold = config_.consistency_threshold;
  options.limit = request.limit;
  options.popularity = &popularity;
  options.recommended_weight = config_.popularity_recommended_weight;
  const HybridResult result = hybrid_recommend(catalog, spec, *matrix, request.ga, options);
  for (const auto& r : result.ranked) entries.push_back(make_result_entry(catalog, r.priced, r.score));
  return entries;
}

HttpResponse Service::handle_combined_cost(const QueryParams& params) {
  MediaType media = MediaType::Json;
  if (auto it = params.find("media_type"); it != params.end() && it->second == "xml") media = MediaType::Xml;
  try {
    CombinedCostRequest request = parse_combined_cost_request(params, config_);
    const CatalogSnapshot snapshot = catalogs_->current();
    if (!snapshot) return error_response(503, media, "", "no catalog loaded");
    if (request.spec.currency.empty()) request.spec.currency = snapshot->currency_table().base_code;

    const std::vector<ResultEntry> entries = rank(*snapshot, request);

    const std::string stamp = clock_();
    for (const auto& e : entries) {
      SelectionRecord rec;
      rec.timestamp = stamp;
      rec.session = request.session;
      for (const auto* id : {&e.compute_id, &e.storage_id, &e.transfer_id})
        if (*id) rec.offer_ids.push_back(**id);
      rec.event = SelectionEvent::Recommended;
      history_->append(rec);
    }

    HttpResponse r;
    if (request.media_type == MediaType::Xml) {
      r.content_type = std::string(kXml);
      r.body = render_xml(entries);
    } else {
      r.content_type = std::string(kJson);
      r.body = render_json(entries);
    }
    return r;
  } catch (const bad_request& e) {
    return error_response(400, media, e.parameter(), e.what());
  } catch (const inconsistent_judgments& e) {
    return error_response(400, media, "comparisons", e.what());
  }
}

HttpResponse Service::handle_record_selection(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error&) {
    return error_response(400, MediaType::Json, "body", "request body must be a JSON object");
  }
  if (!j.is_object()) return error_response(400, MediaType::Json, "body", "request body must be a JSON object");

  SelectionRecord rec;
  try {
    rec.session = j.value("session", std::string("anonymous"));
    if (!j.contains("offer_ids") || !j["offer_ids"].is_array() || j["offer_ids"].empty())
      return error_response(400, MediaType::Json, "offer_ids", "'offer_ids' must be a non-empty array");
    rec.offer_ids = j["offer_ids"].get<std::vector<std::string>>();
    const auto event = parse_selection_event(j.value("event", std::string("selected")));
    if (!event) return error_response(400, MediaType::Json, "event", "'event' must be recommended or selected");
    rec.event = *event;
    rec.timestamp = j.contains("timestamp") ? j["timestamp"].get<std::string>() : clock_();
  } catch (const json::exception& e) {
    return error_response(400, MediaType::Json, "body", e.what());
  }
  for (const auto& id : rec.offer_ids)
    if (!catalogs_->knows_offer(id))
      return error_response(400, MediaType::Json, "offer_ids", fmt::format("unknown offer id '{}'", id));

  const bool fresh = history_->append(rec);
  return json_response(fresh ? 201 : 200, {{"status", fresh ? "recorded" : "duplicate"},
                                           {"timestamp", rec.timestamp}});
}

HttpResponse Service::handle_popularity(const QueryParams& params) const {
  std::vector<std::string> filter;
  if (auto it = params.find("offer_ids"); it != params.end() && !it->second.empty()) filter = split(it->second, ',');
  json offers = json::object();
  for (const auto& [id, c] : history_->popularity(filter))
    offers[id] = {{"recommended", c.recommended}, {"selected", c.selected}};
  return json_response(200, {{"offers", offers}});
}

HttpResponse Service::handle_config() const {
  json levels = json::object();
  for (Dimension d : {Dimension::Storage, Dimension::Compute, Dimension::Traffic}) {
    json dim = json::object();
    for (VagueLevel l : {VagueLevel::Small, VagueLevel::Medium, VagueLevel::Large})
      dim[std::string(to_string(l))] = config_.vague_mapping.value(d, l);
    levels[std::string(to_string(d))] = dim;
  }
  json continents = json::array();
  for (Continent c : all_continents()) continents.push_back(std::string(to_string(c)));
  json criteria = json::array();
  for (Criterion c : all_criteria()) criteria.push_back(std::string(to_string(c)));
  json currencies = json::array();
  if (auto snapshot = catalogs_->current())
    for (const auto& [code, rate] : snapshot->currency_table().rates) currencies.push_back(code);
  return json_response(200, {{"vague_levels", levels},
                             {"continents", continents},
                             {"criteria", criteria},
                             {"currencies", currencies},
                             {"compatibility_policy", std::string(to_string(config_.policy))},
                             {"consistency_threshold", config_.consistency_threshold}});
}

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto params_of = [](const httplib::Request& req) {
    QueryParams params;
    for (const auto& [k, v] : req.params) params.emplace(k, v);  // first occurrence wins
    return params;
  };
  auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server_->Get("/api/cost/combined", [this, params_of, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.handle_combined_cost(params_of(req)));
  });
  server_->Post("/api/history/selection", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.handle_record_selection(req.body));
  });
  server_->Get("/api/history/popularity", [this, params_of, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.handle_popularity(params_of(req)));
  });
  server_->Get("/api/config", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, service_.handle_config());
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw error(fmt::format("cannot bind {}:{}", host, port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  return bound;
}

void HttpServer::listen(const std::string& host, int port) {
  if (!server_->listen(host, port)) throw error(fmt::format("cannot listen on {}:{}", host, port));
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace cloudsel
