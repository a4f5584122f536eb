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

#include "speechscale/melfit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "speechscale/error.hpp"

namespace speechscale {
namespace {

// Independent mel evaluations, frozen.
constexpr double kMelAt1000 = 999.9855371396244;
constexpr double kMelAt700 = 781.1728387480312;

double Mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }

std::vector<MelSample> MelSamples(double gain, double offset, int n = 50, double hi = 8000) {
  std::vector<MelSample> out;
  for (int i = 0; i < n; ++i) {
    const double f = hi * i / (n - 1);
    out.push_back({f, gain * Mel(f) + offset});
  }
  return out;
}

TEST(MelEval, Values) {
  EXPECT_DOUBLE_EQ(mel_eval(kStandardMel, 0.0), 0.0);
  EXPECT_NEAR(mel_eval(kStandardMel, 1000.0), kMelAt1000, 1e-9);
  EXPECT_NEAR(mel_eval(kStandardMel, 700.0), kMelAt700, 1e-9);
  EXPECT_THROW(mel_eval(kStandardMel, -1.0), InvalidArgument);
  EXPECT_THROW(mel_eval({2595, 0}, 100.0), InvalidArgument);
}

TEST(FitMel, RecoversStandardMelUncalibrated) {
  const auto samples = MelSamples(1.0, 0.0);
  MelFitOptions options;
  options.calibrate = false;
  const auto fit = fit_mel(samples, options);
  EXPECT_NEAR(fit.params.a, 2595.0, 0.01 * 2595.0);
  EXPECT_NEAR(fit.params.b, 700.0, 0.01 * 700.0);
  EXPECT_GT(fit.r_squared, 0.999999);
}

TEST(FitMel, AffineInvariance) {
  for (auto [gain, offset] : {std::pair{2.0, 5.0}, std::pair{0.1, -3.0}}) {
    const auto fit = fit_mel(MelSamples(gain, offset));
    EXPECT_NEAR(fit.params.b, 700.0, 7.0) << gain;
    EXPECT_GT(fit.r_squared, 0.999999) << gain;
    // The calibrated map undoes the transform and lands on mel units.
    const double f = 2000.0;
    EXPECT_NEAR(fit.affine(gain * Mel(f) + offset), mel_eval(fit.params, f), 1e-3 * Mel(f));
  }
}

TEST(FitMel, CalibratedParamsPassThroughThousand) {
  const auto fit = fit_mel(MelSamples(3.0, 1.0));
  EXPECT_NEAR(mel_eval(fit.params, 1000.0), 1000.0, 1e-9);
}

TEST(FitMel, FoundBIsLocalMinimum) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> bdist(200, 2000);
  for (int trial = 0; trial < 20; ++trial) {
    const MelParams truth{1000.0, bdist(rng)};
    std::vector<MelSample> samples;
    std::normal_distribution<double> noise(0.0, 2.0);
    for (int i = 1; i <= 40; ++i) {
      const double f = 100.0 * i;
      samples.push_back({f, mel_eval(truth, f) + noise(rng)});
    }
    const auto fit = fit_mel(samples);
    const double at = mel_fit_residual(samples, fit.params.b, true);
    EXPECT_LE(at, mel_fit_residual(samples, fit.params.b * 1.01, true));
    EXPECT_LE(at, mel_fit_residual(samples, fit.params.b * 0.99, true));
  }
}

TEST(FitMel, Errors) {
  std::vector<MelSample> flat{{100, 3}, {200, 3}, {300, 3}, {400, 3}};
  EXPECT_THROW(fit_mel(flat), InvalidArgument);
  std::vector<MelSample> few{{100, 1}, {100, 2}, {200, 3}};
  EXPECT_THROW(fit_mel(few), InvalidArgument);
  MelFitOptions bad;
  bad.b_range = {500, 100};
  EXPECT_THROW(fit_mel(MelSamples(1, 0), bad), InvalidArgument);
}

// A piecewise scale whose band slopes follow the mel curve.
PiecewiseWarp MelShapedWarp(int bands, double lo, double hi) {
  const auto bounds = log_spaced_grid(lo, hi, bands + 1);
  std::vector<double> betas;
  for (int l = 0; l < bands; ++l) {
    const double slope = (Mel(bounds[l + 1]) - Mel(bounds[l])) / std::log(bounds[l + 1] / bounds[l]);
    betas.push_back(1.0 / slope);
  }
  return build_piecewise(betas, BandPartition(bounds));
}

TEST(CompareScales, MelShapedWarpMatchesMel) {
  const auto warp = WarpFunction::piecewise(MelShapedWarp(64, 100, 8000));
  const auto grid = log_spaced_grid(100, 8000, 200);
  const auto cmp = compare_scales(warp, kStandardMel, grid);
  EXPECT_LT(cmp.rms_deviation, 0.5);
  EXPECT_EQ(cmp.table.size(), 200u);
  EXPECT_GE(cmp.max_deviation, cmp.rms_deviation);
}

TEST(CompareScales, LogIsLocallyMel) {
  const auto warp = WarpFunction::piecewise(build_piecewise(std::vector<double>{1.0},
                                                            BandPartition({900, 1100})));
  const auto cmp = compare_scales(warp, kStandardMel, log_spaced_grid(900, 1100, 50));
  EXPECT_LT(cmp.rms_deviation, 1.0);
}

TEST(CompareScales, Errors) {
  EXPECT_THROW(compare_scales(WarpFunction::log(), kStandardMel, std::vector<double>{}),
               InvalidArgument);
  const auto warp = WarpFunction::piecewise(MelShapedWarp(4, 200, 4000));
  EXPECT_THROW(compare_scales(warp, kStandardMel, log_spaced_grid(100, 8000, 20)), InvalidArgument);
}

TEST(LogSpacedGrid, Endpoints) {
  const auto g = log_spaced_grid(100, 10000, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g[0], 100);
  EXPECT_NEAR(g[1], 1000, 1e-9);
  EXPECT_DOUBLE_EQ(g[2], 10000);
  EXPECT_THROW(log_spaced_grid(100, 10000, 1), InvalidArgument);
}

}  // namespace
}  // namespace speechscale
