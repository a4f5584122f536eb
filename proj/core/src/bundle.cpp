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

#include "speechscale/bundle.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <system_error>

#include "json_util.hpp"
#include "speechscale/error.hpp"

namespace speechscale {
namespace {

using detail::Json;
using detail::number_array;
using detail::number_or_nan;
using detail::require;

Json warp_json(const PiecewiseWarp& warp) {
  return {{"boundaries_hz", warp.partition().boundaries()},
          {"betas", warp.betas()},
          {"anchor_hz", warp.anchor_hz()}};
}

PiecewiseWarp warp_from(const Json& j) {
  try {
    const BandPartition partition(number_array(j, "boundaries_hz"));
    const auto betas = number_array(j, "betas");
    const PiecewiseWarp warp = build_piecewise(betas, partition);
    if (j.contains("anchor_hz") && std::abs(number_or_nan(j.at("anchor_hz")) - partition.lower()) >
                                       1e-8 * partition.lower()) {
      throw ParseError("warp anchor_hz must equal the first boundary");
    }
    return warp;
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid warp: ") + e.what());
  }
}

Json shifts_json(const ShiftMatrix& shifts) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < shifts.rows(); ++r) {
    Json values = Json::array();
    for (std::size_t c = 0; c < shifts.cols(); ++c) {
      values.push_back(shifts.available(r, c) ? Json(shifts(r, c)) : Json(nullptr));
    }
    rows.push_back({{"id", shifts.speaker_ids()[r]}, {"values", values}});
  }
  return {{"bands", shifts.band_labels()}, {"rows", rows}};
}

ShiftMatrix shifts_from(const Json& j) {
  const auto bands = require(j, "bands").get<std::vector<std::string>>();
  const Json& rows = require(j, "rows");
  std::vector<std::string> ids;
  for (const auto& row : rows) ids.push_back(require(row, "id").get<std::string>());
  ShiftMatrix shifts(ids, bands);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto values = number_array(rows[r], "values");
    if (values.size() != bands.size()) throw ParseError("shift row width does not match band count");
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (!std::isnan(values[c])) shifts.set(r, c, values[c]);
    }
  }
  return shifts;
}

double ratio_from(const Json& j) {
  // Infinite ratios are written as null.
  return j.is_null() ? std::numeric_limits<double>::infinity() : number_or_nan(j);
}

template <class Fn>
auto parse_artifact(std::string_view text, std::string_view what, Fn fn) {
  const Json j = detail::parse_json(text, what);
  try {
    return fn(j);
  } catch (const Json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string to_json(const PiecewiseWarp& warp) { return detail::canonical_dump(warp_json(warp)); }

PiecewiseWarp piecewise_warp_from_json(std::string_view text) {
  return parse_artifact(text, "warp", [](const Json& j) { return warp_from(j); });
}

std::string to_json(const ScaleEstimate& e) {
  Json factors = Json::object();
  for (std::size_t i = 0; i < e.speaker_ids.size(); ++i) {
    factors[e.speaker_ids[i]] = e.speaker_factors[i];
  }
  Json j;
  j["betas"] = e.betas;
  j["speaker_factors"] = factors;
  j["residual_rms"] = e.residual_rms;
  j["converged"] = e.converged;
  j["iterations"] = e.iterations;
  j["partition"] = {{"boundaries_hz", e.partition.boundaries()}};
  j["warp"] = warp_json(e.warp);
  j["shifts"] = shifts_json(e.shifts);
  j["provenance"] = {{"vowels", e.vowels},
                     {"reference", e.reference.label()},
                     {"options", {{"max_iters", e.options.max_iters}, {"tol", e.options.tol}}}};
  return detail::canonical_dump(j);
}

ScaleEstimate scale_estimate_from_json(std::string_view text) {
  return parse_artifact(text, "scale estimate", [](const Json& j) {
    ScaleEstimate e;
    e.betas = number_array(j, "betas");
    e.residual_rms = number_or_nan(require(j, "residual_rms"));
    e.converged = j.value("converged", false);
    e.iterations = j.value("iterations", 0);
    e.partition = BandPartition(number_array(require(j, "partition"), "boundaries_hz"));
    e.warp = warp_from(require(j, "warp"));
    e.shifts = shifts_from(require(j, "shifts"));
    e.speaker_ids = e.shifts.speaker_ids();
    const Json& factors = require(j, "speaker_factors");
    for (const auto& id : e.speaker_ids) {
      e.speaker_factors.push_back(number_or_nan(require(factors, id.c_str())));
    }
    const Json& prov = require(j, "provenance");
    e.vowels = require(prov, "vowels").get<std::vector<std::string>>();
    const auto ref = require(prov, "reference").get<std::string>();
    e.reference = ref == "grand-mean" ? Reference::grand_mean() : Reference::speaker(ref);
    const Json& opts = require(prov, "options");
    e.options.max_iters = require(opts, "max_iters").get<int>();
    e.options.tol = number_or_nan(require(opts, "tol"));
    return e;
  });
}

std::string to_json(const AlignmentResult& r, std::string_view warp_ref) {
  Json speakers = Json::array();
  for (std::size_t a = 0; a < r.speaker_ids.size(); ++a) {
    speakers.push_back({{"id", r.speaker_ids[a]},
                        {"formants_raw_hz", a < r.formants_raw_hz.size() ? Json(r.formants_raw_hz[a])
                                                                         : Json::array()},
                        {"formants_warped", r.formants_warped[a]},
                        {"alpha", r.translations[a]}});
  }
  Json j;
  j["vowel"] = r.vowel;
  j["warp"] = r.warp_name;
  j["warp_ref"] = std::string(warp_ref);
  j["per_speaker"] = speakers;
  j["target"] = r.target;
  j["spread_before"] = r.spread_before;
  j["spread_after"] = r.spread_after;
  j["improvement_ratio"] = r.improvement_ratio;
  return detail::canonical_dump(j);
}

AlignmentResult alignment_from_json(std::string_view text) {
  return parse_artifact(text, "alignment bundle", [](const Json& j) {
    AlignmentResult r;
    r.vowel = require(j, "vowel").get<std::string>();
    r.warp_name = j.value("warp", std::string());
    for (const auto& s : require(j, "per_speaker")) {
      r.speaker_ids.push_back(require(s, "id").get<std::string>());
      r.formants_raw_hz.push_back(number_array(s, "formants_raw_hz"));
      r.formants_warped.push_back(number_array(s, "formants_warped"));
      r.translations.push_back(number_or_nan(require(s, "alpha")));
    }
    r.target = number_array(j, "target");
    r.spread_before = number_array(j, "spread_before");
    r.spread_after = number_array(j, "spread_after");
    for (const auto& x : require(j, "improvement_ratio")) r.improvement_ratio.push_back(ratio_from(x));
    return r;
  });
}

std::string to_json(const MelReport& report) {
  const auto& fit = report.fit;
  const double ln10 = std::log(10.0);
  Json table = Json::array();
  for (const auto& row : report.comparison.table) {
    table.push_back({{"f", row.f},
                     {"nu_calibrated", row.nu_calibrated},
                     {"eta_mel", row.eta_mel},
                     {"deviation", row.deviation}});
  }
  Json j;
  j["params"] = {{"a", fit.params.a}, {"b", fit.params.b}};
  // The same curve written with a natural log: a / ln 10 * ln(1 + f / b).
  j["params_natural_log"] = {{"a", fit.params.a / ln10}, {"b", fit.params.b}};
  j["affine"] = {{"gain", fit.affine.gain}, {"offset", fit.affine.offset}};
  j["r_squared"] = fit.r_squared;
  j["rms_error"] = fit.rms_error;
  j["reference_params"] = {{"a", report.reference.a}, {"b", report.reference.b}};
  j["comparison"] = {{"affine", {{"gain", report.comparison.affine.gain},
                                 {"offset", report.comparison.affine.offset}}},
                     {"rms_deviation", report.comparison.rms_deviation},
                     {"max_deviation", report.comparison.max_deviation}};
  j["table"] = table;
  j["warp_ref"] = report.warp_ref;
  return detail::canonical_dump(j);
}

MelReport mel_report_from_json(std::string_view text) {
  return parse_artifact(text, "mel report", [](const Json& j) {
    MelReport m;
    const Json& params = require(j, "params");
    m.fit.params = {number_or_nan(require(params, "a")), number_or_nan(require(params, "b"))};
    const Json& affine = require(j, "affine");
    m.fit.affine = {number_or_nan(require(affine, "gain")), number_or_nan(require(affine, "offset"))};
    m.fit.r_squared = number_or_nan(require(j, "r_squared"));
    m.fit.rms_error = number_or_nan(require(j, "rms_error"));
    const Json& ref = require(j, "reference_params");
    m.reference = {number_or_nan(require(ref, "a")), number_or_nan(require(ref, "b"))};
    const Json& cmp = require(j, "comparison");
    const Json& cmp_affine = require(cmp, "affine");
    m.comparison.affine = {number_or_nan(require(cmp_affine, "gain")),
                           number_or_nan(require(cmp_affine, "offset"))};
    m.comparison.rms_deviation = number_or_nan(require(cmp, "rms_deviation"));
    m.comparison.max_deviation = number_or_nan(require(cmp, "max_deviation"));
    for (const auto& row : require(j, "table")) {
      m.comparison.table.push_back({number_or_nan(require(row, "f")),
                                    number_or_nan(require(row, "nu_calibrated")),
                                    number_or_nan(require(row, "eta_mel")),
                                    number_or_nan(require(row, "deviation"))});
    }
    m.warp_ref = j.value("warp_ref", std::string());
    return m;
  });
}

std::string corpus_summary_json(const Corpus& corpus) {
  Json diagnostics = Json::array();
  for (const auto& d : corpus.diagnostics) {
    diagnostics.push_back({{"line", d.line}, {"reason", d.reason}});
  }
  Json speakers = Json::array();
  for (const auto& r : corpus.records) {
    speakers.push_back({{"id", r.speaker_id}, {"group", r.group}, {"tokens", r.tokens.size()}});
  }
  Json j;
  j["source"] = corpus.source;
  j["column_map_digest"] = corpus.column_map_digest;
  j["speaker_count"] = corpus.records.size();
  j["token_count"] = corpus.token_count();
  j["vowels"] = corpus.vowels;
  j["speakers"] = speakers;
  j["diagnostics"] = diagnostics;
  return detail::canonical_dump(j);
}

PiecewiseWarp load_warp(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return parse_artifact(text, path.string(), [](const Json& j) {
    return j.contains("warp") ? warp_from(j.at("warp")) : warp_from(j);
  });
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return text;
}

void write_bundle(const ScaleEstimate& estimate, const std::filesystem::path& path) {
  write_text_file(path, to_json(estimate));
}

void write_bundle(const AlignmentResult& result, std::string_view warp_ref,
                  const std::filesystem::path& path) {
  write_text_file(path, to_json(result, warp_ref));
}

void write_bundle(const MelReport& report, const std::filesystem::path& path) {
  write_text_file(path, to_json(report));
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

std::string canonicalize_json(std::string_view text) {
  return detail::canonical_dump(detail::parse_json(text, "json"));
}

}  // namespace speechscale
