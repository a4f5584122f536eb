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
#include <string>
#include <utility>
#include <vector>

namespace speechscale {

// One uniform acoustic tube. Length in meters, area in cm^2. Areas only
// enter the resonance condition as a ratio, so their unit cancels.
struct TubeSection {
  double length = 0.0;
  double area = 0.0;

  friend bool operator==(const TubeSection&, const TubeSection&) = default;
};

inline constexpr double kDefaultSpeedOfSound = 350.0;  // m/s

// Concatenated tubes ordered from glottis (closed end) to lips (open end).
struct TubeConfig {
  std::vector<TubeSection> sections;
  double speed_of_sound = kDefaultSpeedOfSound;

  // Throws InvalidArgument unless there is at least one section and every
  // length, area and the speed of sound are positive and finite.
  void validate() const;

  friend bool operator==(const TubeConfig&, const TubeConfig&) = default;
};

// Two-tube tract: pharyngeal cavity (L1, A1) followed by the oral cavity
// (L2, A2).
TubeConfig two_tube(double pharynx_length, double pharynx_area,
                    double oral_length, double oral_area,
                    double speed_of_sound = kDefaultSpeedOfSound);

// Resonant frequencies of one speaker's vowel token. Formants are strictly
// ascending, positive and finite.
struct FormantSet {
  std::string speaker_id;
  std::string vowel;
  std::vector<double> formants;

  // Throws InvalidArgument if the formant invariant does not hold.
  void validate() const;

  friend bool operator==(const FormantSet&, const FormantSet&) = default;
};

// Junction balance for the glottis-closed / lips-open two-tube tract:
//
//   A2 * cot(k L2) - A1 * tan(k L1),   k = 2 pi f / c
//
// Zero crossings between poles are the resonances. Positive just above 0 Hz.
// Requires exactly two sections and f > 0.
double characteristic(const TubeConfig& config, double f);

// Frequencies (Hz, ascending) in (0, f_max) where characteristic() has a
// pole. Used to tell resonances from the sign flips that poles produce.
std::vector<double> characteristic_poles(const TubeConfig& config,
                                         double f_max);

struct FormantSearch {
  FormantSet set;
  // False when fewer than the requested number of resonances lie below f_max.
  bool complete = true;
};

// Lowest `count` resonances below f_max. Sign changes are located on a 1 Hz
// grid; cells that hold an analytic pole are split around it so the pole's
// own sign flip is never taken for a root. Roots are bisected well past
// 0.01 Hz.
FormantSearch formants(const TubeConfig& config, int count, double f_max);

// An f_max that comfortably contains the first `count` resonances.
double resonance_search_limit(const TubeConfig& config, int count);

enum class ScaleWhich { kAll, kOralOnly };

// Multiplies section lengths by kappa (all sections, or only the last one).
TubeConfig scale_tract(const TubeConfig& config, double kappa,
                       ScaleWhich which = ScaleWhich::kAll);

struct PopulationMember {
  std::string speaker_id;
  TubeConfig config;
  FormantSet formants;
};

// Speakers sharing the base pharynx and areas with oral-cavity lengths drawn
// uniformly from [oral_min, oral_max]. oral_min == oral_max is allowed and
// yields identical speakers. Output order is speaker-index order, ids are
// "s01", "s02", ...
std::vector<PopulationMember> synth_population(
    const TubeConfig& base, int speaker_count,
    std::pair<double, double> oral_length_range, int formant_count,
    std::uint64_t seed, const std::string& vowel = "aa");

// Options for a population built directly from a frequency model: speaker A's
// formant k is base_k * exp(beta_k * c_A) * exp(noise), with c_A uniform in
// log_factor_range and noise ~ N(0, noise_sigma) in nepers.
struct BandScaledPopulationOptions {
  int speaker_count = 20;
  std::pair<double, double> log_factor_range{-0.25, 0.25};
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
};

struct BandScaledPopulation {
  std::vector<FormantSet> speakers;
  std::vector<double> log_factors;  // c_A per speaker
};

// betas.size() must equal base.formants.size().
BandScaledPopulation synth_band_scaled_population(
    const FormantSet& base, const std::vector<double>& betas,
    const BandScaledPopulationOptions& options);

}  // namespace speechscale
