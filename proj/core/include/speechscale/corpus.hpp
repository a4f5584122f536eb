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

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "speechscale/estimate.hpp"

namespace speechscale {

// Splits a combined token such as "m01ae" into speaker, group and vowel
// with a regular expression. Capture group indices are 1-based; 0 means the
// part is not taken from the pattern.
struct IdPattern {
  std::string regex;
  int speaker = 0;
  int group = 0;
  int vowel = 0;

  friend bool operator==(const IdPattern&, const IdPattern&) = default;
};

enum class CorpusFormat { kCsv, kTable };

// Where each field lives. Column references are header names for CSV; a
// reference made only of digits is a 0-based field index, which is the only
// form whitespace tables support.
struct ColumnMap {
  CorpusFormat format = CorpusFormat::kCsv;
  std::string id_column = "speaker_id";
  std::string vowel_column = "vowel";  // empty: vowel comes from id_pattern
  std::string group_column = "group";  // empty or absent: group from rules
  std::vector<std::string> formant_columns;
  std::optional<IdPattern> id_pattern;
  // Id prefix (or captured group text) -> group label.
  std::map<std::string, std::string> group_rule;
  double missing_sentinel = 0.0;
  std::vector<std::string> comment_prefixes{"#"};

  void validate() const;
  // Stable hex digest of the map's canonical JSON.
  std::string digest() const;

  // speaker_id, group, vowel, f1_hz .. fK_hz.
  static ColumnMap canonical(std::size_t formant_count);

  friend bool operator==(const ColumnMap&, const ColumnMap&) = default;
};

std::string to_json(const ColumnMap& map);
ColumnMap column_map_from_json(std::string_view text);
ColumnMap load_column_map(const std::filesystem::path& path);

// One excluded row or skipped line.
struct Diagnostic {
  std::size_t line = 0;  // 1-based
  std::string reason;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct Corpus {
  std::vector<SpeakerRecord> records;  // first-appearance order
  std::vector<std::string> vowels;     // sorted, unique
  std::string source;
  std::string column_map_digest;
  std::vector<Diagnostic> diagnostics;

  std::size_t token_count() const;
  const SpeakerRecord* find(const std::string& speaker_id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// RFC 4180 CSV with a header row. Rows with the missing sentinel in a formant
// column, unparseable values or non-ascending formants are excluded and
// reported. Throws ParseError on missing columns or zero valid rows,
// IoError when unreadable.
Corpus parse_csv(const std::filesystem::path& path, const ColumnMap& map);
Corpus parse_csv_text(std::string_view text, const ColumnMap& map, const std::string& source = "");

// Canonical CSV: formant columns are detected from the f<k>_hz header names.
Corpus parse_canonical_csv(const std::filesystem::path& path);

// Whitespace-separated table. Lines whose id does not match the id pattern or
// whose numeric fields do not parse are skipped with a diagnostic. Throws
// ParseError when data lines disagree on field count or none are found.
Corpus parse_table(const std::filesystem::path& path, const ColumnMap& map);
Corpus parse_table_text(std::string_view text, const ColumnMap& map,
                        const std::string& source = "");

// Dispatches on map.format.
Corpus load_corpus(const std::filesystem::path& path, const std::optional<ColumnMap>& map);

// Canonical CSV; formants use the shortest round-trip representation.
std::string corpus_to_csv(const std::vector<SpeakerRecord>& records);

// Groups formant sets into speaker records by speaker_id, keeping order.
std::vector<SpeakerRecord> group_by_speaker(const std::vector<FormantSet>& sets,
                                            const std::string& group = "");

}  // namespace speechscale
