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

#include <filesystem>
#include <string>
#include <string_view>

#include "speechscale/align.hpp"
#include "speechscale/corpus.hpp"
#include "speechscale/estimate.hpp"
#include "speechscale/melfit.hpp"
#include "speechscale/warp.hpp"

// JSON artifacts. Every writer emits canonical text: sorted keys, two-space
// indentation, floats at 9 significant digits, non-finite numbers as null.
// Identical values therefore serialize to identical bytes.
namespace speechscale {

// {boundaries_hz, betas, anchor_hz}; slopes and offsets are rebuilt on load.
std::string to_json(const PiecewiseWarp& warp);
PiecewiseWarp piecewise_warp_from_json(std::string_view text);

std::string to_json(const ScaleEstimate& estimate);
ScaleEstimate scale_estimate_from_json(std::string_view text);

// Plot-ready alignment bundle. warp_ref names the warp that was applied.
std::string to_json(const AlignmentResult& result, std::string_view warp_ref);
AlignmentResult alignment_from_json(std::string_view text);

struct MelReport {
  MelFitResult fit;
  MelParams reference = kStandardMel;
  ScaleComparison comparison;  // estimated warp vs the reference mel curve
  std::string warp_ref;

  friend bool operator==(const MelReport&, const MelReport&) = default;
};

std::string to_json(const MelReport& report);
MelReport mel_report_from_json(std::string_view text);

// Corpus summary: counts, vowel inventory and diagnostics.
std::string corpus_summary_json(const Corpus& corpus);

// Reads the warp from either a bare warp document or a scale estimate.
PiecewiseWarp load_warp(const std::filesystem::path& path);

// Writes text to path via a temporary file and rename. IoError names the path.
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

void write_bundle(const ScaleEstimate& estimate, const std::filesystem::path& path);
void write_bundle(const AlignmentResult& result, std::string_view warp_ref,
                  const std::filesystem::path& path);
void write_bundle(const MelReport& report, const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

// Canonical re-serialization of arbitrary JSON text.
std::string canonicalize_json(std::string_view text);

}  // namespace speechscale
