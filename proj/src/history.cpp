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

#include "cloudsel/history.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace cloudsel {

using nlohmann::json;

std::string_view to_string(SelectionEvent e) noexcept {
  return e == SelectionEvent::Recommended ? "recommended" : "selected";
}

std::optional<SelectionEvent> parse_selection_event(std::string_view text) noexcept {
  if (text == "recommended") return SelectionEvent::Recommended;
  if (text == "selected") return SelectionEvent::Selected;
  return std::nullopt;
}

std::string SelectionRecord::key() const {
  std::string k = session;
  k += '\x1f';
  for (const auto& id : offer_ids) {
    k += id;
    k += '\x1e';
  }
  k += '\x1f';
  k += to_string(event);
  k += '\x1f';
  k += timestamp;
  return k;
}

std::string to_json_line(const SelectionRecord& r) {
  json j = {{"timestamp", r.timestamp},
            {"session", r.session},
            {"offer_ids", r.offer_ids},
            {"event", std::string(to_string(r.event))}};
  return j.dump();
}

SelectionRecord parse_record_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    SelectionRecord r;
    r.timestamp = j.at("timestamp").get<std::string>();
    r.session = j.at("session").get<std::string>();
    r.offer_ids = j.at("offer_ids").get<std::vector<std::string>>();
    const auto event = parse_selection_event(j.at("event").get<std::string>());
    if (!event) throw parse_error("unknown selection event");
    r.event = *event;
    return r;
  } catch (const json::exception& e) {
    throw parse_error(fmt::format("malformed history record: {}", e.what()));
  }
}

PopularityStats fold_records(std::span<const SelectionRecord> records) {
  PopularityStats stats;
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.key()).second) continue;
    for (const auto& id : r.offer_ids) {
      auto& counts = stats[id];
      (r.event == SelectionEvent::Recommended ? counts.recommended : counts.selected) += 1;
    }
  }
  return stats;
}

std::string utc_timestamp() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const std::time_t secs = system_clock::to_time_t(now);
  const auto micros = duration_cast<microseconds>(now.time_since_epoch()).count() % 1000000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:06}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                     tm.tm_hour, tm.tm_min, tm.tm_sec, micros);
}

HistoryStore::HistoryStore(std::string log_path, std::size_t compact_every)
    : log_path_(std::move(log_path)), compact_every_(compact_every) {
  if (log_path_.empty()) return;
  load();
  log_.open(log_path_, std::ios::app);
  if (!log_) throw parse_error(fmt::format("cannot open history log '{}'", log_path_));
}

void HistoryStore::load() {
  namespace fs = std::filesystem;
  if (fs::exists(snapshot_path())) {
    try {
      const json snap = json::parse(read_text_file(snapshot_path()));
      for (const auto& [id, counts] : snap.at("stats").items())
        stats_[id] = {counts.at("recommended").get<long long>(), counts.at("selected").get<long long>()};
      for (const auto& key : snap.at("keys")) keys_.insert(key.get<std::string>());
    } catch (const json::exception& e) {
      throw parse_error(fmt::format("malformed history snapshot: {}", e.what()));
    }
  }
  if (fs::exists(log_path_)) {
    std::istringstream in(read_text_file(log_path_));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      SelectionRecord r = parse_record_line(line);
      if (!keys_.insert(r.key()).second) continue;
      apply(r);
      live_.push_back(std::move(r));
    }
  }
}

void HistoryStore::apply(const SelectionRecord& record) {
  for (const auto& id : record.offer_ids) {
    auto& counts = stats_[id];
    (record.event == SelectionEvent::Recommended ? counts.recommended : counts.selected) += 1;
  }
}

bool HistoryStore::append(const SelectionRecord& record) {
  std::lock_guard lock(mutex_);
  if (!keys_.insert(record.key()).second) return false;
  if (log_.is_open()) {
    log_ << to_json_line(record) << '\n';
    log_.flush();
  }
  apply(record);
  live_.push_back(record);
  if (compact_every_ > 0 && live_.size() >= compact_every_) compact_locked();
  return true;
}

PopularityStats HistoryStore::popularity(std::span<const std::string> filter) const {
  std::lock_guard lock(mutex_);
  if (filter.empty()) return stats_;
  PopularityStats out;
  for (const auto& id : filter) {
    auto it = stats_.find(id);
    out[id] = it == stats_.end() ? OfferPopularity{} : it->second;
  }
  return out;
}

std::vector<SelectionRecord> HistoryStore::records() const {
  std::lock_guard lock(mutex_);
  return live_;
}

void HistoryStore::compact() {
  std::lock_guard lock(mutex_);
  compact_locked();
}

void HistoryStore::compact_locked() {
  if (log_path_.empty()) {
    live_.clear();
    return;
  }
  json stats = json::object();
  for (const auto& [id, c] : stats_) stats[id] = {{"recommended", c.recommended}, {"selected", c.selected}};
  std::vector<std::string> keys(keys_.begin(), keys_.end());
  std::sort(keys.begin(), keys.end());
  const json snap = {{"stats", stats}, {"keys", keys}};

  // Snapshot is renamed into place before the log is truncated.
  const std::string tmp = snapshot_path() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << snap.dump() << '\n';
    if (!out) throw parse_error(fmt::format("cannot write history snapshot '{}'", tmp));
  }
  std::filesystem::rename(tmp, snapshot_path());
  log_.close();
  log_.open(log_path_, std::ios::trunc);
  log_.close();
  log_.open(log_path_, std::ios::app);
  live_.clear();
}

}  // namespace cloudsel
