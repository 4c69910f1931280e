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

#include <gtest/gtest.h>

#include <httplib.h>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <regex>

#include "cloudsel/errors.hpp"
#include "cloudsel/service.hpp"
#include "support/oracles.hpp"

namespace cloudsel {
namespace {

using nlohmann::json;

const QueryParams kGoldenQuery = {
    {"media_type", "xml"},
    {"currency", "AUD"},
    {"storage", "500"},
    {"duration", "31"},
    {"data_upload_size", "15"},
    {"data_download_size", "30"},
    {"continent", "North America,South America,Antarctica,Africa,Europe,Asia,Australia"},
};

struct Fixture {
  std::shared_ptr<CatalogStore> catalogs;
  std::shared_ptr<HistoryStore> history = std::make_shared<HistoryStore>();
  Service service;

  explicit Fixture(const std::string& catalog = testing::data_file("catalog.json"))
      : catalogs(std::make_shared<CatalogStore>(load_catalog_file(catalog))),
        service(catalogs, history, EngineConfig{}, [] { return std::string("2026-01-01T00:00:00.000000Z"); }) {}
};

std::vector<std::string> xml_values(const std::string& body, const std::string& tag) {
  std::vector<std::string> out;
  const std::regex re("<" + tag + ">([^<]*)</" + tag + ">");
  for (auto it = std::sregex_iterator(body.begin(), body.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back((*it)[1]);
  return out;
}

TEST(Service, GoldenQueryReturnsXmlList) {
  Fixture f;
  const HttpResponse r = f.service.handle_combined_cost(kGoldenQuery);
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.content_type, "application/xml");
  EXPECT_EQ(r.body.rfind("<list>", 0), 0u);
  const auto names = xml_values(r.body, "name");
  ASSERT_FALSE(names.empty());
  EXPECT_EQ(names.size(), xml_values(r.body, "website").size());
  EXPECT_EQ(names.size(), xml_values(r.body, "region_name").size());
  EXPECT_NE(r.body.find("<Combined_service>"), std::string::npos);
  for (const auto& c : xml_values(r.body, "currency")) EXPECT_EQ(c, "AUD");
  const auto totals = xml_values(r.body, "total_cost");
  for (std::size_t i = 1; i < totals.size(); ++i) EXPECT_LE(std::stod(totals[i - 1]), std::stod(totals[i]));
}

TEST(Service, TotalsMatchCostEngine) {
  Fixture f;
  QueryParams q = kGoldenQuery;
  q["media_type"] = "json";
  const HttpResponse r = f.service.handle_combined_cost(q);
  ASSERT_EQ(r.status, 200);
  const json body = json::parse(r.body);
  const auto catalog = f.catalogs->current();
  UsageVector usage;
  usage.storage = 500;
  usage.data_upload = 15;
  usage.data_download = 30;
  usage.vm_count = 1;
  usage.duration_days = 31;
  for (const auto& e : body.at("list")) {
    Bundle b;
    if (e.contains("compute_id")) b.compute_id = e["compute_id"].get<std::string>();
    if (e.contains("storage_id")) b.storage_id = e["storage_id"].get<std::string>();
    if (e.contains("transfer_id")) b.transfer_id = e["transfer_id"].get<std::string>();
    EXPECT_NEAR(e.at("total_cost").get<double>(), bundle_cost(*catalog, b, usage, "AUD").total, 1e-9);
  }
}

TEST(Service, InvalidParametersAreNamed) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"media_type", "csv"},       {"currency", "ZZZZ"},         {"currency", "XYZ"},
      {"storage", "-5"},           {"duration", "32"},           {"duration", "0"},
      {"data_upload_size", "-1"},  {"data_download_size", "abc"}, {"continent", "Atlantis"},
      {"storage", "nan"},
  };
  Fixture f;
  for (const auto& [name, value] : cases) {
    QueryParams q = kGoldenQuery;
    q[name] = value;
    const HttpResponse r = f.service.handle_combined_cost(q);
    EXPECT_EQ(r.status, 400) << name << "=" << value;
    EXPECT_EQ(xml_values(r.body, "parameter").size() + (r.body.find("\"parameter\": \"" + name + "\"") != std::string::npos),
              1u)
        << r.body;
    EXPECT_NE(r.body.find(name), std::string::npos) << r.body;
  }
}

TEST(Service, ErrorBodyFollowsMediaType) {
  Fixture f;
  QueryParams q = kGoldenQuery;
  q["storage"] = "-5";
  const HttpResponse x = f.service.handle_combined_cost(q);
  EXPECT_EQ(x.content_type, "application/xml");
  EXPECT_EQ(xml_values(x.body, "parameter"), std::vector<std::string>{"storage"});
  q["media_type"] = "json";
  const HttpResponse j = f.service.handle_combined_cost(q);
  EXPECT_EQ(j.content_type, "application/json");
  EXPECT_EQ(json::parse(j.body).at("parameter"), "storage");
}

TEST(Service, XmlAndJsonCarryTheSameFields) {
  Fixture f;
  const HttpResponse x = f.service.handle_combined_cost(kGoldenQuery);
  QueryParams q = kGoldenQuery;
  q["media_type"] = "json";
  const HttpResponse j = f.service.handle_combined_cost(q);
  const json list = json::parse(j.body).at("list");
  ASSERT_EQ(list.size(), xml_values(x.body, "name").size());
  for (const char* field : {"name", "website", "region_name", "provider", "currency"}) {
    const auto xs = xml_values(x.body, field);
    for (std::size_t i = 0; i < list.size(); ++i) EXPECT_EQ(list[i].at(field).get<std::string>(), xs[i]) << field;
  }
  for (const char* field : {"total_cost", "compute_cost", "storage_cost", "transfer_in_cost", "transfer_out_cost"}) {
    const auto xs = xml_values(x.body, field);
    for (std::size_t i = 0; i < list.size(); ++i)
      EXPECT_EQ(fmt::format("{}", list[i].at(field).get<double>()), xs[i]) << field;
  }
}

TEST(Service, RepeatedRequestsAreIdentical) {
  Fixture f;
  QueryParams q = kGoldenQuery;
  q["criteria"] = "total_cost,relative_speed";
  q["comparisons"] = "3";
  const std::string a = f.service.handle_combined_cost(q).body;
  const std::string b = f.service.handle_combined_cost(q).body;
  EXPECT_EQ(a, b);
  EXPECT_FALSE(xml_values(a, "score").empty());
}

TEST(Service, InconsistentComparisonsAreBadRequest) {
  Fixture f;
  QueryParams q = kGoldenQuery;
  q["criteria"] = "total_cost,relative_speed,memory";
  q["comparisons"] = "9,0.1111111111,9";
  const HttpResponse r = f.service.handle_combined_cost(q);
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(xml_values(r.body, "parameter"), std::vector<std::string>{"comparisons"});
}

TEST(Service, RecommendationsAreRecorded) {
  Fixture f;
  QueryParams q = kGoldenQuery;
  q["limit"] = "3";
  const HttpResponse r = f.service.handle_combined_cost(q);
  ASSERT_EQ(r.status, 200);
  const auto compute = xml_values(r.body, "compute_id");
  ASSERT_EQ(compute.size(), 3u);
  const auto stats = f.history->popularity();
  for (const auto& id : compute) EXPECT_GE(stats.at(id).recommended, 1);
}

TEST(Service, SelectionEndpoint) {
  Fixture f;
  const std::string body = R"({"session": "u1", "offer_ids": ["aws-us-east-1-vm-small"], "timestamp": "t1"})";
  HttpResponse r = f.service.handle_record_selection(body);
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(json::parse(r.body).at("status"), "recorded");
  r = f.service.handle_record_selection(body);
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body).at("status"), "duplicate");

  EXPECT_EQ(f.service.handle_record_selection(R"({"offer_ids": ["ghost"]})").status, 400);
  EXPECT_EQ(f.service.handle_record_selection(R"({"offer_ids": []})").status, 400);
  EXPECT_EQ(f.service.handle_record_selection("not json").status, 400);
  EXPECT_EQ(json::parse(f.service.handle_record_selection(R"({"offer_ids": [1]})").body).at("parameter"), "body");
  EXPECT_EQ(
      json::parse(f.service.handle_record_selection(R"({"offer_ids": ["aws-us-east-1-vm-small"], "event": "x"})").body)
          .at("parameter"),
      "event");

  const json pop = json::parse(f.service.handle_popularity({{"offer_ids", "aws-us-east-1-vm-small,ghost"}}).body);
  EXPECT_EQ(pop.at("offers").at("aws-us-east-1-vm-small").at("selected"), 1);
  EXPECT_EQ(pop.at("offers").at("ghost").at("selected"), 0);
  EXPECT_EQ(pop.at("offers").size(), 2u);
}

TEST(Service, ConfigEndpoint) {
  Fixture f;
  const json c = json::parse(f.service.handle_config().body);
  EXPECT_EQ(c.at("continents").size(), 7u);
  EXPECT_EQ(c.at("vague_levels").at("storage").at("medium"), 1000);
  EXPECT_EQ(c.at("compatibility_policy"), "same-region");
  EXPECT_NE(std::find(c.at("currencies").begin(), c.at("currencies").end(), "AUD"), c.at("currencies").end());
  EXPECT_NE(std::find(c.at("criteria").begin(), c.at("criteria").end(), "cost_per_workload"), c.at("criteria").end());
}

TEST(Service, NoCatalogIsUnavailable) {
  auto catalogs = std::make_shared<CatalogStore>(nullptr);
  Service s(catalogs, std::make_shared<HistoryStore>(), EngineConfig{});
  EXPECT_EQ(s.handle_combined_cost(kGoldenQuery).status, 503);
}

TEST(Service, ExtendedParameters) {
  const EngineConfig config;
  QueryParams q = kGoldenQuery;
  q["compute_level"] = "large";
  q["policy"] = "none";
  q["limit"] = "7";
  q["criteria"] = "total_cost:min,memory";
  const auto req = parse_combined_cost_request(q, config);
  EXPECT_EQ(req.policy, CompatibilityPolicy::None);
  EXPECT_EQ(req.limit, 7u);
  EXPECT_EQ(req.spec.criteria.size(), 2u);
  EXPECT_EQ(req.spec.vague_levels.at(Dimension::Compute), VagueLevel::Large);
  EXPECT_FALSE(req.spec.usage.vm_count);
  EXPECT_EQ(req.spec.continents.size(), 7u);
  q["criteria"] = "colour";
  EXPECT_THROW(parse_combined_cost_request(q, config), bad_request);
}

TEST(HttpServer, ServesEndpoints) {
  Fixture f;
  HttpServer server(f.service);
  const int port = server.start("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);

  httplib::Params params(kGoldenQuery.begin(), kGoldenQuery.end());
  auto res = client.Get("/api/cost/combined", params, httplib::Headers{});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/xml");
  EXPECT_FALSE(xml_values(res->body, "region_name").empty());

  params.erase("storage");
  params.emplace("storage", "-5");
  res = client.Get("/api/cost/combined", params, httplib::Headers{});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  res = client.Post("/api/history/selection", R"({"offer_ids": ["gce-us-central1-storage"]})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);

  res = client.Get("/api/history/popularity?offer_ids=gce-us-central1-storage");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body).at("offers").at("gce-us-central1-storage").at("selected"), 1);

  res = client.Get("/api/config");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  server.stop();
}

}  // namespace
}  // namespace cloudsel
