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

// Helpers shared by the unit and acceptance suites. The oracles here are
// written from first principles and deliberately avoid the library's own
// code paths.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "speechscale/acoustic.hpp"
#include "speechscale/estimate.hpp"

namespace speechscale::testing {

// Two-tube junction balance evaluated directly: A2 cot(k L2) - A1 tan(k L1).
inline double oracle_characteristic(double l1, double a1, double l2, double a2, double c,
                                    double f) {
  const double k = 2.0 * std::numbers::pi * f / c;
  return a2 * std::cos(k * l2) / std::sin(k * l2) - a1 * std::sin(k * l1) / std::cos(k * l1);
}

// Analytic pole positions of the characteristic below f_max.
inline std::vector<double> oracle_poles(double l1, double l2, double c, double f_max) {
  std::vector<double> poles;
  for (int n = 0; (2 * n + 1) * c / (4 * l1) < f_max; ++n) poles.push_back((2 * n + 1) * c / (4 * l1));
  for (int n = 1; n * c / (2 * l2) < f_max; ++n) poles.push_back(n * c / (2 * l2));
  return poles;
}

// Dense 0.1 Hz scan; sign changes whose cell contains an analytic pole are
// discarded, the rest are bisected to 1e-9 Hz.
inline std::vector<double> oracle_roots(double l1, double a1, double l2, double a2, double c,
                                        double f_max, std::size_t count) {
  const auto poles = oracle_poles(l1, l2, c, f_max + 1.0);
  const auto g = [&](double f) { return oracle_characteristic(l1, a1, l2, a2, c, f); };
  std::vector<double> roots;
  constexpr double kStep = 0.1;
  for (int i = 1; roots.size() < count; ++i) {
    const double lo = i * kStep;
    const double hi = (i + 1) * kStep;
    if (hi > f_max) break;
    if ((g(lo) < 0) == (g(hi) < 0)) continue;
    bool pole = false;
    for (double p : poles) pole = pole || (p >= lo && p <= hi);
    if (pole) continue;
    double a = lo, b = hi;
    while (b - a > 1e-9) {
      const double m = 0.5 * (a + b);
      if ((g(m) < 0) == (g(a) < 0)) a = m;
      else b = m;
    }
    roots.push_back(0.5 * (a + b));
  }
  return roots;
}

// Speakers whose formant k equals base_k * exp(beta_k * c_A), built inline so
// estimator tests do not depend on the library's own generator.
inline std::vector<SpeakerRecord> injected_records(const std::vector<double>& base,
                                                   const std::vector<double>& betas,
                                                   const std::vector<double>& factors,
                                                   const std::string& vowel = "aa") {
  std::vector<SpeakerRecord> records;
  for (std::size_t a = 0; a < factors.size(); ++a) {
    FormantSet token;
    token.speaker_id = "spk" + std::to_string(a);
    token.vowel = vowel;
    for (std::size_t k = 0; k < base.size(); ++k) {
      token.formants.push_back(base[k] * std::exp(betas[k] * factors[a]));
    }
    records.push_back(SpeakerRecord{token.speaker_id, "", {token}});
  }
  return records;
}

inline std::vector<double> uniform_factors(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(dist(rng));
  return out;
}

// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("speechscale_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace speechscale::testing
