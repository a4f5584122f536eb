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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <regex>
#include <set>
#include <unordered_map>

#include "json_util.hpp"
#include "speechscale/bundle.hpp"
#include "speechscale/error.hpp"

namespace speechscale {
namespace {

using detail::Json;

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_index_ref(std::string_view ref) {
  return !ref.empty() &&
         std::all_of(ref.begin(), ref.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<double> parse_number(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string_view strip_bom(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  return text;
}

// RFC 4180 records. Quoted fields may span lines; blank lines are dropped.
std::vector<CsvRow> read_csv_rows(std::string_view text) {
  text = strip_bom(text);
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  row.line = 1;

  const auto end_row = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    const bool blank = row.fields.size() == 1 && trim(row.fields[0]).empty();
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{};
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (row.fields.empty() && !field_started) {
      row.line = line;
      field_started = true;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        row.fields.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field starting near line " + std::to_string(row.line));
  if (field_started || !field.empty() || !row.fields.empty()) end_row();
  return rows;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Accumulates accepted tokens into speaker records and excluded rows into
// diagnostics; shared by the CSV and table readers.
class CorpusBuilder {
 public:
  CorpusBuilder(const ColumnMap& map, std::string source) : map_(map) {
    corpus_.source = std::move(source);
    corpus_.column_map_digest = map.digest();
    if (map.id_pattern) pattern_.emplace(map.id_pattern->regex);
  }

  bool id_matches(std::string_view id) const {
    if (!pattern_) return true;
    const std::string s(id);
    return std::regex_match(s, *pattern_);
  }

  void reject(std::size_t line, std::string reason) {
    corpus_.diagnostics.push_back({line, std::move(reason)});
  }

  void add(std::size_t line, std::string_view id_field, std::optional<std::string_view> vowel_field,
           std::optional<std::string_view> group_field,
           const std::vector<std::pair<std::string, std::string_view>>& formant_fields) {
    std::string id(trim(id_field));
    std::string speaker = id;
    std::string vowel = vowel_field ? std::string(trim(*vowel_field)) : std::string();
    std::string group = group_field ? std::string(trim(*group_field)) : std::string();

    if (pattern_) {
      std::smatch m;
      if (!std::regex_match(id, m, *pattern_)) {
        reject(line, "id '" + id + "' does not match the id pattern");
        return;
      }
      const auto& p = *map_.id_pattern;
      const auto capture = [&](int index) {
        return index > 0 && static_cast<std::size_t>(index) < m.size() ? m[index].str() : std::string();
      };
      if (p.speaker > 0) speaker = capture(p.speaker);
      if (p.vowel > 0 && vowel.empty()) vowel = capture(p.vowel);
      if (p.group > 0 && group.empty()) {
        const std::string key = capture(p.group);
        const auto it = map_.group_rule.find(key);
        group = it != map_.group_rule.end() ? it->second : key;
      }
    }
    if (speaker.empty()) {
      reject(line, "empty speaker id");
      return;
    }
    if (vowel.empty()) {
      reject(line, "missing vowel label");
      return;
    }
    if (group.empty()) group = group_from_prefix(speaker);

    FormantSet token;
    token.speaker_id = speaker;
    token.vowel = vowel;
    for (const auto& [column, text] : formant_fields) {
      const auto value = parse_number(text);
      if (!value) {
        reject(line, "unparseable value '" + std::string(trim(text)) + "' in column " + column);
        return;
      }
      if (*value == map_.missing_sentinel) {
        reject(line, "missing formant (sentinel) in column " + column);
        return;
      }
      if (!std::isfinite(*value) || *value <= 0.0) {
        reject(line, "non-positive formant in column " + column);
        return;
      }
      token.formants.push_back(*value);
    }
    for (std::size_t k = 1; k < token.formants.size(); ++k) {
      if (!(token.formants[k] > token.formants[k - 1])) {
        reject(line, "non-ascending formants");
        return;
      }
    }

    auto [it, inserted] = index_.try_emplace(speaker, corpus_.records.size());
    if (inserted) corpus_.records.push_back(SpeakerRecord{speaker, group, {}});
    auto& record = corpus_.records[it->second];
    if (record.group.empty()) record.group = group;
    record.tokens.push_back(std::move(token));
  }

  Corpus finish() && {
    if (corpus_.records.empty()) {
      throw ParseError("no valid rows in " + (corpus_.source.empty() ? "input" : corpus_.source));
    }
    std::set<std::string> vowels;
    for (const auto& r : corpus_.records) {
      for (const auto& t : r.tokens) vowels.insert(t.vowel);
    }
    corpus_.vowels.assign(vowels.begin(), vowels.end());
    return std::move(corpus_);
  }

 private:
  std::string group_from_prefix(const std::string& speaker) const {
    std::string best;
    std::size_t best_len = 0;
    for (const auto& [prefix, label] : map_.group_rule) {
      if (prefix.size() >= best_len && speaker.compare(0, prefix.size(), prefix) == 0) {
        best = label;
        best_len = prefix.size();
      }
    }
    return best;
  }

  const ColumnMap& map_;
  std::optional<std::regex> pattern_;
  Corpus corpus_;
  std::unordered_map<std::string, std::size_t> index_;
};

std::size_t resolve_table_ref(const std::string& ref, const char* what) {
  if (!is_index_ref(ref)) {
    throw InvalidArgument(std::string("table column maps need numeric field indices for ") + what +
                          ", got '" + ref + "'");
  }
  return static_cast<std::size_t>(std::stoul(ref));
}

}  // namespace

void ColumnMap::validate() const {
  if (id_column.empty()) throw InvalidArgument("column map needs an id column");
  if (formant_columns.empty()) throw InvalidArgument("column map needs at least one formant column");
  std::set<std::string> seen(formant_columns.begin(), formant_columns.end());
  if (seen.size() != formant_columns.size()) {
    throw InvalidArgument("column map formant columns must be distinct");
  }
  if (vowel_column.empty() && (!id_pattern || id_pattern->vowel <= 0)) {
    throw InvalidArgument("column map needs a vowel column or an id pattern with a vowel group");
  }
  if (id_pattern) {
    try {
      std::regex check(id_pattern->regex);
      const auto groups = static_cast<int>(check.mark_count());
      for (int g : {id_pattern->speaker, id_pattern->group, id_pattern->vowel}) {
        if (g < 0 || g > groups) throw InvalidArgument("id pattern refers to a missing capture group");
      }
    } catch (const std::regex_error& e) {
      throw InvalidArgument(std::string("invalid id pattern: ") + e.what());
    }
  }
}

std::string ColumnMap::digest() const { return sha256_hex(to_json(*this)); }

ColumnMap ColumnMap::canonical(std::size_t formant_count) {
  ColumnMap map;
  for (std::size_t k = 1; k <= formant_count; ++k) {
    map.formant_columns.push_back("f" + std::to_string(k) + "_hz");
  }
  return map;
}

std::string to_json(const ColumnMap& map) {
  Json j;
  j["format"] = map.format == CorpusFormat::kCsv ? "csv" : "table";
  j["id_column"] = map.id_column;
  j["vowel_column"] = map.vowel_column;
  j["group_column"] = map.group_column;
  j["formant_columns"] = map.formant_columns;
  if (map.id_pattern) {
    j["id_pattern"] = {{"regex", map.id_pattern->regex},
                       {"speaker", map.id_pattern->speaker},
                       {"group", map.id_pattern->group},
                       {"vowel", map.id_pattern->vowel}};
  } else {
    j["id_pattern"] = nullptr;
  }
  j["group_rule"] = map.group_rule;
  j["missing_sentinel"] = map.missing_sentinel;
  j["comment_prefixes"] = map.comment_prefixes;
  return detail::canonical_dump(j);
}

ColumnMap column_map_from_json(std::string_view text) {
  const Json j = detail::parse_json(text, "column map");
  if (!j.is_object()) throw ParseError("column map must be a JSON object");
  ColumnMap map;
  try {
    if (j.contains("format")) {
      const auto format = j.at("format").get<std::string>();
      if (format == "csv") {
        map.format = CorpusFormat::kCsv;
      } else if (format == "table") {
        map.format = CorpusFormat::kTable;
        map.vowel_column.clear();
        map.group_column.clear();
      } else {
        throw ParseError("column map format must be 'csv' or 'table', got '" + format + "'");
      }
    }
    if (j.contains("id_column")) map.id_column = j.at("id_column").get<std::string>();
    if (j.contains("vowel_column")) map.vowel_column = j.at("vowel_column").get<std::string>();
    if (j.contains("group_column")) map.group_column = j.at("group_column").get<std::string>();
    if (j.contains("formant_columns")) {
      map.formant_columns = j.at("formant_columns").get<std::vector<std::string>>();
    }
    if (j.contains("id_pattern") && !j.at("id_pattern").is_null()) {
      const Json& p = j.at("id_pattern");
      map.id_pattern = IdPattern{p.at("regex").get<std::string>(), p.value("speaker", 0),
                                 p.value("group", 0), p.value("vowel", 0)};
    }
    if (j.contains("group_rule")) {
      map.group_rule = j.at("group_rule").get<std::map<std::string, std::string>>();
    }
    if (j.contains("missing_sentinel")) map.missing_sentinel = j.at("missing_sentinel").get<double>();
    if (j.contains("comment_prefixes")) {
      map.comment_prefixes = j.at("comment_prefixes").get<std::vector<std::string>>();
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("column map: ") + e.what());
  }
  map.validate();
  return map;
}

ColumnMap load_column_map(const std::filesystem::path& path) {
  return column_map_from_json(read_text_file(path));
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.tokens.size();
  return n;
}

const SpeakerRecord* Corpus::find(const std::string& speaker_id) const {
  for (const auto& r : records) {
    if (r.speaker_id == speaker_id) return &r;
  }
  return nullptr;
}

Corpus parse_csv_text(std::string_view text, const ColumnMap& map, const std::string& source) {
  map.validate();
  const std::vector<CsvRow> rows = read_csv_rows(text);
  if (rows.empty()) throw ParseError("missing header row in " + (source.empty() ? "input" : source));
  std::vector<std::string> header;
  for (const auto& h : rows.front().fields) header.emplace_back(trim(h));

  const auto resolve = [&](const std::string& ref) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), ref);
    if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
    if (is_index_ref(ref) && std::stoul(ref) < header.size()) return std::stoul(ref);
    return std::nullopt;
  };
  const auto require_column = [&](const std::string& ref) {
    const auto index = resolve(ref);
    if (!index) throw ParseError("missing column '" + ref + "'");
    return *index;
  };

  const std::size_t id_col = require_column(map.id_column);
  std::optional<std::size_t> vowel_col;
  if (!map.vowel_column.empty()) vowel_col = require_column(map.vowel_column);
  std::optional<std::size_t> group_col;
  if (!map.group_column.empty()) group_col = resolve(map.group_column);
  std::vector<std::pair<std::string, std::size_t>> formant_cols;
  for (const auto& ref : map.formant_columns) formant_cols.emplace_back(ref, require_column(ref));

  CorpusBuilder builder(map, source);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != header.size()) {
      builder.reject(row.line, "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(row.fields.size()));
      continue;
    }
    std::vector<std::pair<std::string, std::string_view>> formants;
    for (const auto& [name, col] : formant_cols) formants.emplace_back(name, row.fields[col]);
    std::optional<std::string_view> vowel;
    if (vowel_col) vowel = row.fields[*vowel_col];
    std::optional<std::string_view> group;
    if (group_col) group = row.fields[*group_col];
    builder.add(row.line, row.fields[id_col], vowel, group, formants);
  }
  return std::move(builder).finish();
}

Corpus parse_csv(const std::filesystem::path& path, const ColumnMap& map) {
  return parse_csv_text(read_text_file(path), map, path.string());
}

Corpus parse_canonical_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto rows = read_csv_rows(text);
  if (rows.empty()) throw ParseError("missing header row in " + path.string());
  std::size_t count = 0;
  static const std::regex kFormantColumn(R"(f(\d+)_hz)");
  for (const auto& field : rows.front().fields) {
    std::smatch m;
    const std::string name(trim(field));
    if (std::regex_match(name, m, kFormantColumn)) count = std::max<std::size_t>(count, std::stoul(m[1].str()));
  }
  if (count == 0) throw ParseError("no f<k>_hz columns in " + path.string());
  return parse_csv_text(text, ColumnMap::canonical(count), path.string());
}

Corpus parse_table_text(std::string_view text, const ColumnMap& map, const std::string& source) {
  map.validate();
  const std::size_t id_col = resolve_table_ref(map.id_column, "the id column");
  std::optional<std::size_t> vowel_col;
  if (!map.vowel_column.empty()) vowel_col = resolve_table_ref(map.vowel_column, "the vowel column");
  std::optional<std::size_t> group_col;
  if (!map.group_column.empty()) group_col = resolve_table_ref(map.group_column, "the group column");
  std::vector<std::pair<std::string, std::size_t>> formant_cols;
  std::size_t max_col = std::max(id_col, std::max(vowel_col.value_or(0), group_col.value_or(0)));
  for (const auto& ref : map.formant_columns) {
    formant_cols.emplace_back(ref, resolve_table_ref(ref, "formant columns"));
    max_col = std::max(max_col, formant_cols.back().second);
  }

  CorpusBuilder builder(map, source);
  std::optional<std::size_t> arity;
  std::size_t line_no = 0;
  text = strip_bom(text);
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (std::any_of(map.comment_prefixes.begin(), map.comment_prefixes.end(),
                    [&](const std::string& p) { return !p.empty() && line.starts_with(p); })) {
      continue;
    }

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      const std::size_t start = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos > start) tokens.push_back(line.substr(start, pos - start));
    }

    const bool is_data =
        tokens.size() > max_col && builder.id_matches(tokens[id_col]) &&
        std::all_of(formant_cols.begin(), formant_cols.end(),
                    [&](const auto& fc) { return parse_number(tokens[fc.second]).has_value(); });
    if (!is_data) {
      builder.reject(line_no, "not a data line");
      continue;
    }
    if (!arity) arity = tokens.size();
    if (tokens.size() != *arity) {
      throw ParseError((source.empty() ? std::string("input") : source) + ":" +
                       std::to_string(line_no) + ": expected " + std::to_string(*arity) +
                       " fields, got " + std::to_string(tokens.size()));
    }
    std::vector<std::pair<std::string, std::string_view>> formants;
    for (const auto& [name, col] : formant_cols) formants.emplace_back(name, tokens[col]);
    std::optional<std::string_view> vowel;
    if (vowel_col) vowel = tokens[*vowel_col];
    std::optional<std::string_view> group;
    if (group_col) group = tokens[*group_col];
    builder.add(line_no, tokens[id_col], vowel, group, formants);
  }
  return std::move(builder).finish();
}

Corpus parse_table(const std::filesystem::path& path, const ColumnMap& map) {
  return parse_table_text(read_text_file(path), map, path.string());
}

Corpus load_corpus(const std::filesystem::path& path, const std::optional<ColumnMap>& map) {
  if (!map) return parse_canonical_csv(path);
  return map->format == CorpusFormat::kCsv ? parse_csv(path, *map) : parse_table(path, *map);
}

std::string corpus_to_csv(const std::vector<SpeakerRecord>& records) {
  std::size_t count = 0;
  for (const auto& r : records) {
    for (const auto& t : r.tokens) count = std::max(count, t.formants.size());
  }
  std::string out = "speaker_id,group,vowel";
  for (std::size_t k = 1; k <= count; ++k) out += ",f" + std::to_string(k) + "_hz";
  out += "\n";
  for (const auto& r : records) {
    for (const auto& t : r.tokens) {
      out += quote_csv(r.speaker_id) + "," + quote_csv(r.group) + "," + quote_csv(t.vowel);
      for (std::size_t k = 0; k < count; ++k) {
        out += ",";
        out += k < t.formants.size() ? format_number(t.formants[k]) : "0";
      }
      out += "\n";
    }
  }
  return out;
}

std::vector<SpeakerRecord> group_by_speaker(const std::vector<FormantSet>& sets,
                                            const std::string& group) {
  std::vector<SpeakerRecord> records;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& set : sets) {
    auto [it, inserted] = index.try_emplace(set.speaker_id, records.size());
    if (inserted) records.push_back(SpeakerRecord{set.speaker_id, group, {}});
    records[it->second].tokens.push_back(set);
  }
  return records;
}

}  // namespace speechscale
