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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "speechscale/error.hpp"

namespace speechscale {
namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require_two_sections(const TubeConfig& config) {
  config.validate();
  if (config.sections.size() != 2) {
    throw InvalidArgument("resonance condition needs exactly two tube sections, got " +
                          std::to_string(config.sections.size()));
  }
}

std::string speaker_label(int index, int count) {
  const int width = std::max<int>(2, static_cast<int>(std::to_string(count).size()));
  std::string digits = std::to_string(index + 1);
  return "s" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
}

// Bisects a sign change of the characteristic inside [lo, hi]. Returns the
// final bracket midpoint.
double bisect(const TubeConfig& config, double lo, double hi) {
  double f_lo = characteristic(config, lo);
  for (int iter = 0; iter < 200 && hi - lo > 1e-10; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = characteristic(config, mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void TubeConfig::validate() const {
  if (sections.empty()) throw InvalidArgument("tube config has no sections");
  if (!positive_finite(speed_of_sound)) {
    throw InvalidArgument("speed of sound must be positive");
  }
  for (const auto& s : sections) {
    if (!positive_finite(s.length) || !positive_finite(s.area)) {
      throw InvalidArgument("tube section length and area must be positive");
    }
  }
}

TubeConfig two_tube(double pharynx_length, double pharynx_area, double oral_length,
                    double oral_area, double speed_of_sound) {
  TubeConfig config{{{pharynx_length, pharynx_area}, {oral_length, oral_area}},
                    speed_of_sound};
  config.validate();
  return config;
}

void FormantSet::validate() const {
  for (std::size_t i = 0; i < formants.size(); ++i) {
    if (!positive_finite(formants[i])) {
      throw InvalidArgument("formant " + std::to_string(i + 1) + " of speaker '" + speaker_id +
                            "' is not a positive finite frequency");
    }
    if (i > 0 && !(formants[i] > formants[i - 1])) {
      throw InvalidArgument("formants of speaker '" + speaker_id + "' are not strictly ascending");
    }
  }
}

double characteristic(const TubeConfig& config, double f) {
  require_two_sections(config);
  if (!(f > 0.0)) throw InvalidArgument("characteristic needs f > 0");
  const auto& pharynx = config.sections[0];
  const auto& oral = config.sections[1];
  const double k = 2.0 * std::numbers::pi * f / config.speed_of_sound;
  return oral.area / std::tan(k * oral.length) - pharynx.area * std::tan(k * pharynx.length);
}

std::vector<double> characteristic_poles(const TubeConfig& config, double f_max) {
  require_two_sections(config);
  const double c = config.speed_of_sound;
  const double l1 = config.sections[0].length;
  const double l2 = config.sections[1].length;
  std::vector<double> poles;
  // tan(k L1) diverges at k L1 = pi/2 + n pi.
  for (int n = 0;; ++n) {
    const double f = (2.0 * n + 1.0) * c / (4.0 * l1);
    if (f >= f_max) break;
    poles.push_back(f);
  }
  // cot(k L2) diverges at k L2 = n pi, n >= 1.
  for (int n = 1;; ++n) {
    const double f = n * c / (2.0 * l2);
    if (f >= f_max) break;
    poles.push_back(f);
  }
  std::sort(poles.begin(), poles.end());
  return poles;
}

double resonance_search_limit(const TubeConfig& config, int count) {
  config.validate();
  double total = 0.0;
  for (const auto& s : config.sections) total += s.length;
  // Every interval between consecutive poles holds one root, and poles occur
  // about every c / (2 L) Hz.
  return (count + 2) * config.speed_of_sound / (2.0 * total);
}

FormantSearch formants(const TubeConfig& config, int count, double f_max) {
  require_two_sections(config);
  if (count < 1) throw InvalidArgument("formant count must be at least 1");
  if (!(f_max > 0.0)) throw InvalidArgument("f_max must be positive");

  const std::vector<double> poles = characteristic_poles(config, f_max + 1.0);
  FormantSearch result;
  auto& found = result.set.formants;
  const auto full = [&] { return static_cast<int>(found.size()) >= count; };

  // Sign change on [a, b] with no pole inside is a root.
  const auto try_segment = [&](double a, double g_a, double b, double g_b) {
    if (full() || g_a == 0.0 || g_b == 0.0) return;
    if ((g_a < 0.0) != (g_b < 0.0)) found.push_back(bisect(config, a, b));
  };

  constexpr double kStep = 1.0;
  double lo = kStep;
  double g_lo = characteristic(config, lo);
  if (g_lo == 0.0) found.push_back(lo);
  auto next_pole = poles.begin();
  while (!full() && lo < f_max) {
    const double hi = std::min(lo + kStep, f_max);
    const double g_hi = characteristic(config, hi);
    while (next_pole != poles.end() && *next_pole < lo) ++next_pole;
    if (next_pole == poles.end() || *next_pole > hi) {
      try_segment(lo, g_lo, hi, g_hi);
    } else {
      // Split the cell around each pole it contains; a root may share the
      // cell with a pole.
      double a = lo, g_a = g_lo;
      for (auto p = next_pole; p != poles.end() && *p <= hi; ++p) {
        const double eps = 1e-9 * *p;
        if (*p - eps > a) try_segment(a, g_a, *p - eps, characteristic(config, *p - eps));
        a = *p + eps;
        g_a = a < hi ? characteristic(config, a) : g_hi;
      }
      if (a < hi) try_segment(a, g_a, hi, g_hi);
    }
    if (g_hi == 0.0 && !full()) found.push_back(hi);
    lo = hi;
    g_lo = g_hi;
  }
  result.complete = full();
  return result;
}

TubeConfig scale_tract(const TubeConfig& config, double kappa, ScaleWhich which) {
  config.validate();
  if (!positive_finite(kappa)) throw InvalidArgument("kappa must be positive");
  TubeConfig scaled = config;
  if (which == ScaleWhich::kAll) {
    for (auto& s : scaled.sections) s.length *= kappa;
  } else {
    scaled.sections.back().length *= kappa;
  }
  return scaled;
}

std::vector<PopulationMember> synth_population(const TubeConfig& base, int speaker_count,
                                               std::pair<double, double> oral_length_range,
                                               int formant_count, std::uint64_t seed,
                                               const std::string& vowel) {
  require_two_sections(base);
  const auto [oral_min, oral_max] = oral_length_range;
  if (speaker_count < 2) throw InvalidArgument("a population needs at least two speakers");
  if (formant_count < 2) throw InvalidArgument("a population needs at least two formants");
  if (!(oral_min > 0.0) || !(oral_min <= oral_max) || !std::isfinite(oral_max)) {
    throw InvalidArgument("oral length range must satisfy 0 < min <= max");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> oral_length(oral_min, oral_max);
  std::vector<PopulationMember> population;
  population.reserve(static_cast<std::size_t>(speaker_count));
  for (int i = 0; i < speaker_count; ++i) {
    TubeConfig config = base;
    config.sections[1].length = oral_min == oral_max ? oral_min : oral_length(rng);
    auto search = formants(config, formant_count, resonance_search_limit(config, formant_count));
    if (!search.complete) {
      throw InvalidArgument("could not resolve the requested formants for speaker " +
                            std::to_string(i + 1));
    }
    PopulationMember member;
    member.speaker_id = speaker_label(i, speaker_count);
    member.config = std::move(config);
    member.formants = std::move(search.set);
    member.formants.speaker_id = member.speaker_id;
    member.formants.vowel = vowel;
    population.push_back(std::move(member));
  }
  return population;
}

BandScaledPopulation synth_band_scaled_population(const FormantSet& base,
                                                  const std::vector<double>& betas,
                                                  const BandScaledPopulationOptions& options) {
  base.validate();
  if (base.formants.empty()) throw InvalidArgument("base formant set is empty");
  if (betas.size() != base.formants.size()) {
    throw InvalidArgument("need one band exponent per base formant");
  }
  if (options.speaker_count < 2) throw InvalidArgument("a population needs at least two speakers");
  const auto [c_min, c_max] = options.log_factor_range;
  if (!(c_min <= c_max)) throw InvalidArgument("log factor range must satisfy min <= max");
  if (!(options.noise_sigma >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> factor(c_min, c_max);
  std::normal_distribution<double> noise(0.0, 1.0);

  BandScaledPopulation population;
  for (int i = 0; i < options.speaker_count; ++i) {
    const double c = c_min == c_max ? c_min : factor(rng);
    FormantSet set;
    set.speaker_id = speaker_label(i, options.speaker_count);
    set.vowel = base.vowel;
    set.formants.reserve(base.formants.size());
    for (std::size_t k = 0; k < base.formants.size(); ++k) {
      double log_f = std::log(base.formants[k]) + betas[k] * c;
      if (options.noise_sigma > 0.0) log_f += options.noise_sigma * noise(rng);
      set.formants.push_back(std::exp(log_f));
    }
    set.validate();
    population.speakers.push_back(std::move(set));
    population.log_factors.push_back(c);
  }
  return population;
}

}  // namespace speechscale
