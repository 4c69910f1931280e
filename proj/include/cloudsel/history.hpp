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

#ifndef CLOUDSEL_HISTORY_HPP
#define CLOUDSEL_HISTORY_HPP

#include <cstddef>
#include <fstream>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cloudsel/matcher.hpp"

namespace cloudsel {

enum class SelectionEvent { Recommended, Selected };

std::string_view to_string(SelectionEvent e) noexcept;
std::optional<SelectionEvent> parse_selection_event(std::string_view text) noexcept;

struct SelectionRecord {
  std::string timestamp;  // ISO-8601 UTC
  std::string session;
  std::vector<std::string> offer_ids;
  SelectionEvent event = SelectionEvent::Selected;

  /// Idempotency key: (session, bundle, event, timestamp).
  std::string key() const;
};

std::string to_json_line(const SelectionRecord& record);
SelectionRecord parse_record_line(std::string_view line);  // throws parse_error

/// Popularity counts from a sequence of records, each applied once per
/// distinct key.
PopularityStats fold_records(std::span<const SelectionRecord> records);

/// Current UTC time as ISO-8601 with microseconds.
std::string utc_timestamp();

/// Append-only selection log with a replayable newline-delimited JSON file.
/// An empty path keeps the log in memory only. Writes are serialized;
/// stats reads see every acknowledged write. With `compact_every` > 0 the
/// log is compacted whenever that many records have accumulated.
class HistoryStore {
 public:
  explicit HistoryStore(std::string log_path = {}, std::size_t compact_every = 0);

  /// Appends unless an identical record was seen before. Returns true when
  /// the record was new.
  bool append(const SelectionRecord& record);

  /// Counts for `filter` (zeros for unseen ids), or every seen offer when
  /// the filter is empty.
  PopularityStats popularity(std::span<const std::string> filter = {}) const;

  /// Records appended since the last compaction, in order.
  std::vector<SelectionRecord> records() const;

  /// Folds the live log into the snapshot file and truncates the log.
  void compact();

  const std::string& log_path() const noexcept { return log_path_; }
  std::string snapshot_path() const { return log_path_ + ".snapshot.json"; }

 private:
  void load();
  void apply(const SelectionRecord& record);
  void compact_locked();

  std::string log_path_;
  std::size_t compact_every_ = 0;
  mutable std::mutex mutex_;
  std::ofstream log_;
  std::unordered_set<std::string> keys_;
  PopularityStats stats_;
  std::vector<SelectionRecord> live_;
};

}  // namespace cloudsel

#endif  // CLOUDSEL_HISTORY_HPP
