// Copyright 2026 The speechscale Authors. All Rights Reserved.
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

#include "speechscale/corpus.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "../test_support.hpp"
#include "speechscale/bundle.hpp"
#include "speechscale/error.hpp"

namespace speechscale {
namespace {

ColumnMap TableMap() {
  ColumnMap map;
  map.format = CorpusFormat::kTable;
  map.id_column = "0";
  map.vowel_column.clear();
  map.group_column.clear();
  map.formant_columns = {"2", "3", "4"};
  map.id_pattern = IdPattern{R"(^(([mwbg])\d{2})([a-z]{2})$)", 1, 2, 3};
  map.group_rule = {{"m", "man"}, {"w", "woman"}};
  return map;
}

const char* kThreeRows =
    "speaker_id,group,vowel,f1_hz,f2_hz,f3_hz\n"
    "a,man,aa,700,1200,2500\n"
    "b,woman,aa,800,1400,2900\n"
    "a,man,iy,300,2300,3000\n";

TEST(ParseCsv, WellFormed) {
  const auto c = parse_csv_text(kThreeRows, ColumnMap::canonical(3));
  EXPECT_EQ(c.token_count(), 3u);
  EXPECT_TRUE(c.diagnostics.empty());
  ASSERT_EQ(c.records.size(), 2u);
  EXPECT_EQ(c.records[0].speaker_id, "a");
  EXPECT_EQ(c.records[0].group, "man");
  EXPECT_EQ(c.vowels, (std::vector<std::string>{"aa", "iy"}));
  EXPECT_EQ(c.find("b")->tokens[0].formants, (std::vector<double>{800, 1400, 2900}));
  EXPECT_EQ(c.find("zz"), nullptr);
}

TEST(ParseCsv, SentinelRowExcluded) {
  const auto c = parse_csv_text(
      "speaker_id,group,vowel,f1_hz,f2_hz,f3_hz\n"
      "a,man,aa,700,1200,2500\n"
      "b,man,aa,700,0,2500\n",
      ColumnMap::canonical(3));
  EXPECT_EQ(c.token_count(), 1u);
  ASSERT_EQ(c.diagnostics.size(), 1u);
  EXPECT_EQ(c.diagnostics[0].line, 3u);
  EXPECT_NE(c.diagnostics[0].reason.find("sentinel"), std::string::npos);
}

TEST(ParseCsv, NonAscendingRejected) {
  const auto c = parse_csv_text(
      "speaker_id,group,vowel,f1_hz,f2_hz,f3_hz\n"
      "a,man,aa,700,1200,2500\n"
      "b,man,aa,1300,1200,2500\n",
      ColumnMap::canonical(3));
  EXPECT_EQ(c.token_count(), 1u);
  ASSERT_EQ(c.diagnostics.size(), 1u);
  EXPECT_NE(c.diagnostics[0].reason.find("non-ascending formants"), std::string::npos);
}

TEST(ParseCsv, QuotedFieldsAndBadNumbers) {
  const auto c = parse_csv_text(
      "speaker_id,group,vowel,f1_hz,f2_hz\n"
      "\"a,1\",\"x \"\"y\"\"\",aa,700,1200\n"
      "b,,aa,seven,1200\n"
      "c,,aa,700\n",
      ColumnMap::canonical(2));
  ASSERT_EQ(c.records.size(), 1u);
  EXPECT_EQ(c.records[0].speaker_id, "a,1");
  EXPECT_EQ(c.records[0].group, "x \"y\"");
  EXPECT_EQ(c.diagnostics.size(), 2u);
}

TEST(ParseCsv, Errors) {
  EXPECT_THROW(parse_csv_text("speaker_id,vowel\n", ColumnMap::canonical(2)), ParseError);
  EXPECT_THROW(parse_csv_text("speaker_id,group,vowel,f1_hz,f2_hz\n", ColumnMap::canonical(2)),
               ParseError);
  EXPECT_THROW(parse_csv("/nonexistent/corpus.csv", ColumnMap::canonical(2)), IoError);
}

TEST(ParseTable, MapApplication) {
  const auto c = parse_table_text("m01ae 250 600 1800 2500\n", TableMap());
  ASSERT_EQ(c.records.size(), 1u);
  EXPECT_EQ(c.records[0].speaker_id, "m01");
  EXPECT_EQ(c.records[0].group, "man");
  EXPECT_EQ(c.records[0].tokens[0].vowel, "ae");
  EXPECT_EQ(c.records[0].tokens[0].formants, (std::vector<double>{600, 1800, 2500}));
}

TEST(ParseTable, GarbageLineSkipped) {
  const auto c = parse_table_text(
      "# comment\n"
      "m01ae 250 600 1800 2500\n"
      "this is not data at all\n"
      "w02iy 240 300 2600 3100\n",
      TableMap());
  EXPECT_EQ(c.token_count(), 2u);
  ASSERT_EQ(c.diagnostics.size(), 1u);
  EXPECT_EQ(c.diagnostics[0].line, 3u);
}

TEST(ParseTable, HeaderOnlyIsError) {
  EXPECT_THROW(parse_table_text("File Dur F1 F2 F3\n", TableMap()), ParseError);
}

TEST(ParseTable, SentinelInTable) {
  const auto c = parse_table_text("m01ae 250 600 1800 2500\nm02ae 250 600 0 2500\n", TableMap());
  EXPECT_EQ(c.token_count(), 1u);
  EXPECT_EQ(c.diagnostics.size(), 1u);
}

TEST(ColumnMapJson, RoundTripAndDigest) {
  const auto map = TableMap();
  const auto back = column_map_from_json(to_json(map));
  EXPECT_EQ(back, map);
  EXPECT_EQ(back.digest(), map.digest());
  EXPECT_NE(map.digest(), ColumnMap::canonical(3).digest());
  EXPECT_THROW(column_map_from_json("{\"format\": \"xml\"}"), Error);
}

TEST(ColumnMapJson, ShippedHillenbrandConfigParsesSample) {
  const char* root = std::getenv("SPEECHSCALE_SOURCE_DIR");
  ASSERT_NE(root, nullptr);
  const auto map = load_column_map(std::filesystem::path(root) / "config/hillenbrand_columns.json");
  const auto c = parse_table_text(
      "Hillenbrand vowel data\n"
      "m01ae   323  174  663 2012 2659\n"
      "w01iy   243  235  437 2761 3372\n"
      "b01uw   263  246  490 1400 2950\n"
      "g01ah   292  225  910 1600 2700\n"
      "m02ae   323  174  0 2012 2659\n",
      map);
  EXPECT_EQ(c.token_count(), 4u);
  EXPECT_EQ(c.diagnostics.size(), 2u);
  EXPECT_EQ(c.records[0].group, "man");
  EXPECT_EQ(c.records[2].group, "boy");
  EXPECT_EQ(c.records[3].group, "girl");
  EXPECT_EQ(c.records[0].tokens[0].formants, (std::vector<double>{663, 2012, 2659}));
}

// Every accepted row is ascending and positive; every rejected row is listed.
TEST(CorpusProperty, RejectionSoundness) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> f(0, 4000);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text = "speaker_id,group,vowel,f1_hz,f2_hz,f3_hz\n";
    int rows = 1 + trial % 10;
    for (int r = 0; r < rows; ++r) {
      text += "s" + std::to_string(r) + ",,aa," + std::to_string(f(rng)) + "," +
              std::to_string(f(rng)) + "," + std::to_string(f(rng)) + "\n";
    }
    try {
      const auto c = parse_csv_text(text, ColumnMap::canonical(3));
      EXPECT_EQ(c.token_count() + c.diagnostics.size(), static_cast<std::size_t>(rows));
      for (const auto& rec : c.records) {
        for (const auto& t : rec.tokens) {
          EXPECT_NO_THROW(t.validate());
        }
      }
    } catch (const ParseError&) {
      // Only when nothing survived.
    }
  }
}

TEST(CorpusToCsv, RoundTrip) {
  const auto records = testing::injected_records({512.25, 1498.1, 2503.7}, {1.1, 1.0, 0.9},
                                                 testing::uniform_factors(5, -0.2, 0.2, 2));
  const auto dir = testing::scratch_dir("csv_round_trip");
  write_text_file(dir / "c.csv", corpus_to_csv(records));
  const auto c = parse_canonical_csv(dir / "c.csv");
  EXPECT_EQ(c.records, records);
}

TEST(GroupBySpeaker, KeepsOrder) {
  const std::vector<FormantSet> sets{{"b", "aa", {1}}, {"a", "aa", {2}}, {"b", "iy", {3}}};
  const auto recs = group_by_speaker(sets, "g");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].speaker_id, "b");
  EXPECT_EQ(recs[0].tokens.size(), 2u);
  EXPECT_EQ(recs[1].group, "g");
}

}  // namespace
}  // namespace speechscale
