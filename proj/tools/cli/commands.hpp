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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace speechscale::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

// Everything a run depends on. Flags fill it first; a --config JSON file is
// applied on top, so keys in the file win over flags.
struct PipelineConfig {
  // Input corpus.
  std::string corpus;
  std::string column_map;  // empty: canonical CSV
  std::vector<std::string> vowels;  // empty: every vowel in the corpus
  std::string partition = "per-formant";
  std::string reference = "grand-mean";
  int max_iters = 500;
  double tol = 1e-12;

  // Alignment.
  std::string vowel;  // empty: first selected vowel
  std::string warp = "scale";  // scale | log | demo | identity
  std::string scale;           // scale or warp JSON for align / fit-mel

  // Mel fit.
  std::pair<double, double> b_range{50.0, 5000.0};
  bool calibrate = true;
  int grid_points = 200;
  std::optional<std::pair<double, double>> grid_range;
  bool extend = false;

  std::string out;
  std::uint64_t seed = 1;
};

// Overlays the keys of a JSON config file. Relative paths inside the file
// are resolved against the file's directory.
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);

// Entry point shared by main() and the tests. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace speechscale::cli
