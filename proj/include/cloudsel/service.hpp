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

#ifndef CLOUDSEL_SERVICE_HPP
#define CLOUDSEL_SERVICE_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cloudsel/catalog.hpp"
#include "cloudsel/config.hpp"
#include "cloudsel/history.hpp"
#include "cloudsel/matcher.hpp"

namespace httplib {
class Server;
}

namespace cloudsel {

enum class MediaType { Json, Xml };

using QueryParams = std::map<std::string, std::string, std::less<>>;

/// Decoded GET /api/cost/combined request: the seven documented parameters
/// plus optional extensions under their own names.
struct CombinedCostRequest {
  MediaType media_type = MediaType::Json;
  RequirementSpec spec;
  CompatibilityPolicy policy = CompatibilityPolicy::SameRegion;
  std::size_t limit = 20;
  std::optional<std::vector<double>> comparisons;  // upper triangle of the AHP matrix
  GAParams ga;
  std::string session = "anonymous";
};

/// Throws bad_request naming the first offending parameter.
CombinedCostRequest parse_combined_cost_request(const QueryParams& params, const EngineConfig& config);

/// One rendered result row.
struct ResultEntry {
  std::string name;         // offer names of the bundle
  std::string website;      // provider website
  std::string region_name;
  std::string provider;
  std::optional<std::string> compute_id;
  std::optional<std::string> storage_id;
  std::optional<std::string> transfer_id;
  CostBreakdown cost;
  std::optional<double> score;
};

ResultEntry make_result_entry(const Catalog& catalog, const PricedBundle& priced, std::optional<double> score);

/// Field name/value pairs of an entry in rendering order; both media
/// types render exactly these.
std::vector<std::pair<std::string, std::string>> entry_fields(const ResultEntry& entry);

std::string render_xml(const std::vector<ResultEntry>& entries);
std::string render_json(const std::vector<ResultEntry>& entries);

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Transport-independent request handlers.
class Service {
 public:
  using Clock = std::function<std::string()>;

  Service(std::shared_ptr<CatalogStore> catalogs, std::shared_ptr<HistoryStore> history, EngineConfig config,
          Clock clock = utc_timestamp);

  HttpResponse handle_combined_cost(const QueryParams& params);
  HttpResponse handle_record_selection(std::string_view body);
  HttpResponse handle_popularity(const QueryParams& params) const;
  HttpResponse handle_config() const;

  const EngineConfig& config() const noexcept { return config_; }

 private:
  std::vector<ResultEntry> rank(const Catalog& catalog, const CombinedCostRequest& request) const;

  std::shared_ptr<CatalogStore> catalogs_;
  std::shared_ptr<HistoryStore> history_;
  EngineConfig config_;
  Clock clock_;
};

/// Binds the service's endpoints to an HTTP listener.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and serves on a background thread; port 0 picks a free port.
  /// Returns the bound port.
  int start(const std::string& host, int port);
  /// Binds and serves on the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace cloudsel

#endif  // CLOUDSEL_SERVICE_HPP
