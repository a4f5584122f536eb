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

#include "speechscale/acoustic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "../test_support.hpp"
#include "speechscale/error.hpp"

namespace speechscale {
namespace {

using testing::oracle_characteristic;
using testing::oracle_roots;

TubeConfig Uniform() { return two_tube(0.0875, 1.0, 0.0875, 1.0); }
TubeConfig Back() { return two_tube(0.09, 1.0, 0.08, 8.0); }

TEST(Characteristic, UniformTubeHasRootAtQuarterWave) {
  EXPECT_NEAR(characteristic(Uniform(), 500.0), 0.0, 1e-9);
  EXPECT_GT(characteristic(Uniform(), 250.0), 0.0);
  EXPECT_LT(characteristic(Uniform(), 750.0), 0.0);
}

TEST(Characteristic, MatchesDirectFormula) {
  for (double f : {123.0, 640.0, 1777.0, 3210.5}) {
    EXPECT_NEAR(characteristic(Back(), f), oracle_characteristic(0.09, 1, 0.08, 8, 350, f),
                1e-9 * (1 + std::abs(characteristic(Back(), f))));
  }
}

TEST(Characteristic, RejectsBadInput) {
  EXPECT_THROW(characteristic(Back(), 0.0), InvalidArgument);
  TubeConfig three = Back();
  three.sections.push_back({0.01, 1.0});
  EXPECT_THROW(characteristic(three, 500.0), InvalidArgument);
}

TEST(Characteristic, PolesMatchAnalyticPositions) {
  const auto poles = characteristic_poles(Back(), 5000.0);
  const auto expected = [] {
    auto p = testing::oracle_poles(0.09, 0.08, 350.0, 5000.0);
    std::sort(p.begin(), p.end());
    return p;
  }();
  ASSERT_EQ(poles.size(), expected.size());
  for (std::size_t i = 0; i < poles.size(); ++i) EXPECT_NEAR(poles[i], expected[i], 1e-9);
}

TEST(Formants, UniformTubeGivesOddHarmonics) {
  const auto search = formants(Uniform(), 3, 4000.0);
  ASSERT_TRUE(search.complete);
  ASSERT_EQ(search.set.formants.size(), 3u);
  EXPECT_NEAR(search.set.formants[0], 500.0, 0.1);
  EXPECT_NEAR(search.set.formants[1], 1500.0, 0.1);
  EXPECT_NEAR(search.set.formants[2], 2500.0, 0.1);
}

TEST(Formants, MatchesDenseGridOracle) {
  const auto search = formants(Back(), 3, 5000.0);
  const auto expected = oracle_roots(0.09, 1, 0.08, 8, 350, 5000.0, 3);
  ASSERT_EQ(expected.size(), 3u);
  ASSERT_EQ(search.set.formants.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(search.set.formants[i], expected[i], 0.1);
    EXPECT_LT(std::abs(characteristic(Back(), search.set.formants[i])), 1e-6 * 9.0);
  }
}

TEST(Formants, IncompleteWhenLimitTooLow) {
  const auto search = formants(Uniform(), 3, 1000.0);
  EXPECT_FALSE(search.complete);
  EXPECT_EQ(search.set.formants.size(), 1u);
}

TEST(Formants, RejectsBadArguments) {
  EXPECT_THROW(formants(Uniform(), 0, 4000.0), InvalidArgument);
  EXPECT_THROW(formants(Uniform(), 3, -1.0), InvalidArgument);
  EXPECT_THROW(two_tube(-0.1, 1, 0.08, 1), InvalidArgument);
  EXPECT_THROW(two_tube(0.1, 0, 0.08, 1), InvalidArgument);
}

TEST(ScaleTract, IdentityAndOralOnly) {
  EXPECT_EQ(scale_tract(Back(), 1.0), Back());
  const auto oral = scale_tract(Back(), 0.8, ScaleWhich::kOralOnly);
  EXPECT_DOUBLE_EQ(oral.sections[0].length, 0.09);
  EXPECT_NEAR(oral.sections[1].length, 0.064, 1e-15);
  EXPECT_THROW(scale_tract(Back(), 0.0), InvalidArgument);
}

TEST(ScaleTract, DoublingHalvesFormants) {
  const auto base = formants(Uniform(), 3, 4000.0).set.formants;
  const auto longer = formants(scale_tract(Uniform(), 2.0), 3, 4000.0).set.formants;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(longer[i], base[i] / 2, 0.1);
}

TEST(ScaleTract, FormantsAreHomogeneousInLength) {
  const auto base = formants(Back(), 3, 6000.0).set.formants;
  for (double kappa : {0.5, 0.8, 1.25, 2.0}) {
    const auto cfg = scale_tract(Back(), kappa);
    const auto scaled = formants(cfg, 3, resonance_search_limit(cfg, 3)).set.formants;
    ASSERT_EQ(scaled.size(), 3u) << kappa;
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(scaled[i], base[i] / kappa, 0.1) << kappa;
  }
}

TEST(SynthPopulation, ZeroWidthRangeGivesIdenticalSpeakers) {
  const auto pop = synth_population(Back(), 4, {0.08, 0.08}, 3, 1);
  ASSERT_EQ(pop.size(), 4u);
  for (const auto& m : pop) EXPECT_EQ(m.formants.formants, pop[0].formants.formants);
  EXPECT_EQ(pop[0].speaker_id, "s01");
  EXPECT_EQ(pop[3].speaker_id, "s04");
}

TEST(SynthPopulation, SeededRunsAreIdentical) {
  const auto a = synth_population(Back(), 4, {0.06, 0.10}, 3, 7);
  const auto b = synth_population(Back(), 4, {0.06, 0.10}, 3, 7);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].config, b[i].config);
    EXPECT_EQ(a[i].formants, b[i].formants);
  }
}

TEST(SynthPopulation, EveryFormantSatisfiesCharacteristic) {
  const auto pop = synth_population(Back(), 8, {0.06, 0.10}, 3, 11);
  for (const auto& m : pop) {
    const auto& s = m.config.sections;
    ASSERT_EQ(m.formants.formants.size(), 3u);
    for (double f : m.formants.formants) {
      const double g = oracle_characteristic(s[0].length, s[0].area, s[1].length, s[1].area,
                                             m.config.speed_of_sound, f);
      EXPECT_LT(std::abs(g), 1e-6 * (s[0].area + s[1].area)) << m.speaker_id << " " << f;
    }
  }
}

TEST(SynthPopulation, RejectsBadArguments) {
  EXPECT_THROW(synth_population(Back(), 1, {0.06, 0.1}, 3, 1), InvalidArgument);
  EXPECT_THROW(synth_population(Back(), 4, {0.1, 0.06}, 3, 1), InvalidArgument);
  EXPECT_THROW(synth_population(Back(), 4, {0.06, 0.1}, 0, 1), InvalidArgument);
}

// Root correctness over random two-tube geometries.
TEST(FormantsProperty, RootsAgreeWithOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> len(0.05, 0.11);
  std::uniform_real_distribution<double> area(0.5, 10.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double l1 = len(rng), l2 = len(rng), a1 = area(rng), a2 = area(rng);
    const auto cfg = two_tube(l1, a1, l2, a2);
    const double limit = resonance_search_limit(cfg, 3);
    const auto got = formants(cfg, 3, limit);
    const auto want = oracle_roots(l1, a1, l2, a2, 350.0, limit, 3);
    ASSERT_TRUE(got.complete);
    ASSERT_EQ(want.size(), 3u);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(got.set.formants[i], want[i], 0.1) << "trial " << trial;
    }
  }
}

TEST(BandScaledPopulation, FollowsModelWithoutNoise) {
  const FormantSet base{"base", "aa", {500, 1500, 2500}};
  BandScaledPopulationOptions options;
  options.speaker_count = 5;
  options.seed = 9;
  const auto pop = synth_band_scaled_population(base, {1.2, 1.0, 0.8}, options);
  ASSERT_EQ(pop.speakers.size(), 5u);
  for (std::size_t a = 0; a < 5; ++a) {
    const double c = pop.log_factors[a];
    EXPECT_GE(c, -0.25);
    EXPECT_LE(c, 0.25);
    EXPECT_NEAR(pop.speakers[a].formants[0], 500 * std::exp(1.2 * c), 1e-9);
    EXPECT_NEAR(pop.speakers[a].formants[2], 2500 * std::exp(0.8 * c), 1e-9);
  }
  EXPECT_THROW(synth_band_scaled_population(base, {1.0, 1.0}, options), InvalidArgument);
}

}  // namespace
}  // namespace speechscale
