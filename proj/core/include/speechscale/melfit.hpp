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

#include <span>
#include <utility>
#include <vector>

#include "speechscale/warp.hpp"

namespace speechscale {

// eta = a * log10(1 + f / b).
struct MelParams {
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const MelParams&, const MelParams&) = default;
};

// The usual closed-form mel scale.
inline constexpr MelParams kStandardMel{2595.0, 700.0};

// Published mel-form fit of the speech scale, kept as a soft reference.
inline constexpr MelParams kPublishedSpeechScaleFit{2478.24, 641.94};

// Throws InvalidArgument for f < 0 or b <= 0.
double mel_eval(const MelParams& params, double f);

// y = gain * x + offset.
struct AffineMap {
  double gain = 1.0;
  double offset = 0.0;

  double operator()(double x) const { return gain * x + offset; }
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

struct MelSample {
  double f = 0.0;   // Hz
  double nu = 0.0;  // scale units
};

struct MelFitOptions {
  std::pair<double, double> b_range{50.0, 5000.0};
  // Fit an offset along with a. The reported affine map then takes the
  // samples to mel units normalized so that 1000 Hz maps to 1000.
  bool calibrate = true;
  double rel_tol = 1e-6;  // golden-section stopping width, relative in b
};

struct MelFitResult {
  MelParams params;
  AffineMap affine;
  double r_squared = 0.0;
  double rms_error = 0.0;  // in calibrated units

  friend bool operator==(const MelFitResult&, const MelFitResult&) = default;
};

// Sum of squared residuals of the best linear fit (a, or a and an offset when
// calibrating) at corner frequency b.
double mel_fit_residual(std::span<const MelSample> samples, double b, bool calibrate);

// For each b the coefficients are a closed-form linear least-squares solve;
// b itself is found by a coarse log-spaced scan followed by golden-section
// search. Throws InvalidArgument on < 3 distinct frequencies, a bad b range
// or constant nu.
MelFitResult fit_mel(std::span<const MelSample> samples, const MelFitOptions& options = {});

struct ScaleComparisonRow {
  double f = 0.0;
  double nu_calibrated = 0.0;
  double eta_mel = 0.0;
  double deviation = 0.0;

  friend bool operator==(const ScaleComparisonRow&, const ScaleComparisonRow&) = default;
};

struct ScaleComparison {
  AffineMap affine;  // warp samples -> mel units
  double rms_deviation = 0.0;
  double max_deviation = 0.0;
  std::vector<ScaleComparisonRow> table;

  friend bool operator==(const ScaleComparison&, const ScaleComparison&) = default;
};

// Least-squares affine calibration of the warp onto the mel curve over the
// grid, with per-point deviations in mel units.
ScaleComparison compare_scales(const WarpFunction& warp, const MelParams& params,
                               std::span<const double> grid);

// n >= 2 points, geometrically spaced from lo to hi inclusive.
std::vector<double> log_spaced_grid(double lo, double hi, int n);

}  // namespace speechscale
