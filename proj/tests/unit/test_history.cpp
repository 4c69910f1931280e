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

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "cloudsel/errors.hpp"
#include "cloudsel/history.hpp"
#include "support/oracles.hpp"

namespace cloudsel {
namespace {

namespace fs = std::filesystem;

SelectionRecord rec(std::string ts, std::vector<std::string> ids, SelectionEvent ev = SelectionEvent::Selected,
                    std::string session = "s1") {
  return {std::move(ts), std::move(session), std::move(ids), ev};
}

class TempLog : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cloudsel_history_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path() const { return (dir_ / "history.jsonl").string(); }

  fs::path dir_;
};

TEST(History, CountsPerOffer) {
  HistoryStore h;
  EXPECT_TRUE(h.append(rec("t1", {"a", "b"}, SelectionEvent::Recommended)));
  EXPECT_TRUE(h.append(rec("t2", {"a"}, SelectionEvent::Recommended)));
  EXPECT_TRUE(h.append(rec("t3", {"a"}, SelectionEvent::Recommended)));
  EXPECT_TRUE(h.append(rec("t4", {"a"})));
  const auto s = h.popularity();
  EXPECT_EQ(s.at("a").recommended, 3);
  EXPECT_EQ(s.at("a").selected, 1);
  EXPECT_EQ(s.at("b").recommended, 1);
}

TEST(History, DuplicateRecordsCountOnce) {
  HistoryStore h;
  EXPECT_TRUE(h.append(rec("t1", {"a"})));
  EXPECT_FALSE(h.append(rec("t1", {"a"})));
  EXPECT_TRUE(h.append(rec("t1", {"a"}, SelectionEvent::Selected, "s2")));
  EXPECT_EQ(h.popularity().at("a").selected, 2);
}

TEST(History, UnseenOffersAreZero) {
  HistoryStore h;
  h.append(rec("t1", {"a"}));
  const std::vector<std::string> filter = {"a", "ghost"};
  const auto s = h.popularity(filter);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.at("ghost").recommended, 0);
  EXPECT_EQ(s.at("ghost").selected, 0);
}

TEST(History, RecordLineRoundTrip) {
  const SelectionRecord r = rec("2026-01-02T03:04:05.000006Z", {"x", "y"}, SelectionEvent::Recommended, "sess");
  const SelectionRecord back = parse_record_line(to_json_line(r));
  EXPECT_EQ(back.key(), r.key());
  EXPECT_EQ(back.offer_ids, r.offer_ids);
  EXPECT_EQ(back.event, r.event);
  EXPECT_THROW(parse_record_line("{nope"), parse_error);
  EXPECT_THROW(parse_record_line(R"({"session": "s"})"), parse_error);
}

TEST(History, EventNames) {
  EXPECT_EQ(parse_selection_event("recommended"), SelectionEvent::Recommended);
  EXPECT_EQ(parse_selection_event("selected"), SelectionEvent::Selected);
  EXPECT_FALSE(parse_selection_event("clicked"));
}

TEST(History, TimestampShape) {
  const std::string t = utc_timestamp();
  ASSERT_EQ(t.size(), 27u);
  EXPECT_EQ(t[4], '-');
  EXPECT_EQ(t[10], 'T');
  EXPECT_EQ(t[19], '.');
  EXPECT_EQ(t.back(), 'Z');
}

TEST(History, CountsNeverDecreaseAndFoldMatchesEveryPrefix) {
  std::mt19937_64 rng(21);
  HistoryStore h;
  std::vector<SelectionRecord> all;
  PopularityStats prev;
  for (int i = 0; i < 300; ++i) {
    const auto id = "o" + std::to_string(testing::uniform_int(rng, 0, 9));
    const auto ts = "t" + std::to_string(testing::uniform_int(rng, 0, 60));
    const auto ev = testing::uniform_int(rng, 0, 1) ? SelectionEvent::Selected : SelectionEvent::Recommended;
    all.push_back(rec(ts, {id}, ev));
    h.append(all.back());
    const auto now = h.popularity();
    for (const auto& [k, v] : prev) {
      EXPECT_GE(now.at(k).recommended, v.recommended);
      EXPECT_GE(now.at(k).selected, v.selected);
    }
    EXPECT_EQ(now, fold_records(all));
    prev = now;
  }
}

TEST_F(TempLog, ReplayRestoresCounts) {
  PopularityStats before;
  {
    HistoryStore h(path());
    h.append(rec("t1", {"a", "b"}, SelectionEvent::Recommended));
    h.append(rec("t2", {"a"}));
    before = h.popularity();
  }
  HistoryStore again(path());
  EXPECT_EQ(again.popularity(), before);
  EXPECT_EQ(again.records().size(), 2u);
  EXPECT_FALSE(again.append(rec("t2", {"a"})));
}

TEST_F(TempLog, CompactionPreservesCountsAndKeys) {
  PopularityStats before;
  {
    HistoryStore h(path());
    for (int i = 0; i < 10; ++i) h.append(rec("t" + std::to_string(i), {"a"}));
    before = h.popularity();
    h.compact();
    EXPECT_TRUE(h.records().empty());
    EXPECT_TRUE(fs::exists(h.snapshot_path()));
    EXPECT_EQ(fs::file_size(path()), 0u);
    h.append(rec("t99", {"b"}));
  }
  HistoryStore again(path());
  EXPECT_EQ(again.popularity().at("a").selected, before.at("a").selected);
  EXPECT_EQ(again.popularity().at("b").selected, 1);
  EXPECT_FALSE(again.append(rec("t3", {"a"})));
}

TEST_F(TempLog, AutomaticCompaction) {
  HistoryStore h(path(), 4);
  for (int i = 0; i < 9; ++i) h.append(rec("t" + std::to_string(i), {"a"}));
  EXPECT_EQ(h.records().size(), 1u);
  EXPECT_EQ(h.popularity().at("a").selected, 9);
}

TEST_F(TempLog, MalformedLogIsParseError) {
  { std::ofstream(path()) << "not json\n"; }
  EXPECT_THROW(HistoryStore h(path()), parse_error);
}

TEST(History, ConcurrentAppendsAreAllCounted) {
  HistoryStore h;
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&h, t] {
      for (int i = 0; i < 250; ++i) h.append(rec(std::to_string(t) + ":" + std::to_string(i), {"a"}));
    });
  for (auto& th : threads) th.join();
  EXPECT_EQ(h.popularity().at("a").selected, 1000);
}

}  // namespace
}  // namespace cloudsel
