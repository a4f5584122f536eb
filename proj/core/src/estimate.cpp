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

#include "speechscale/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "speechscale/error.hpp"

namespace speechscale {
namespace {

constexpr double kNoVariationRms = 1e-12;

void require_vowels(const std::vector<SpeakerRecord>& records,
                    const std::vector<std::string>& vowels) {
  if (records.empty()) throw InvalidArgument("no speaker records");
  if (vowels.empty()) throw InvalidArgument("empty vowel selection");
}

// Per-speaker, per-vowel mean log formants. cells[a][v] is empty when speaker
// a has no token of vowel v.
using Cells = std::vector<std::vector<std::vector<double>>>;

Cells collect_cells(const std::vector<SpeakerRecord>& records,
                    const std::vector<std::string>& vowels) {
  Cells cells(records.size());
  for (std::size_t a = 0; a < records.size(); ++a) {
    bool any = false;
    for (const auto& vowel : vowels) {
      cells[a].push_back(mean_log_formants(records[a], vowel));
      any = any || !cells[a].back().empty();
    }
    if (!any) {
      throw InvalidArgument("speaker '" + records[a].speaker_id +
                            "' has no tokens of the selected vowels");
    }
  }
  return cells;
}

double objective(const ShiftMatrix& m, const std::vector<double>& betas,
                 const std::vector<double>& factors) {
  double sum = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!m.available(r, c)) continue;
      const double e = m(r, c) - betas[c] * factors[r];
      sum += e * e;
    }
  }
  return sum;
}

}  // namespace

std::vector<double> mean_log_formants(const SpeakerRecord& record, const std::string& vowel) {
  std::vector<double> sums;
  std::vector<int> counts;
  for (const auto& token : record.tokens) {
    if (token.vowel != vowel) continue;
    if (token.formants.size() > sums.size()) {
      sums.resize(token.formants.size(), 0.0);
      counts.resize(token.formants.size(), 0);
    }
    for (std::size_t k = 0; k < token.formants.size(); ++k) {
      sums[k] += std::log(token.formants[k]);
      ++counts[k];
    }
  }
  for (std::size_t k = 0; k < sums.size(); ++k) sums[k] /= counts[k];
  return sums;
}

BandPartition choose_partition(const std::vector<SpeakerRecord>& records,
                               const std::vector<std::string>& vowels, const PartitionMode& mode) {
  if (mode.kind == PartitionMode::Kind::kExplicit) return BandPartition(mode.boundaries);
  require_vowels(records, vowels);

  std::size_t formant_count = 0;
  for (const auto& record : records) {
    for (const auto& token : record.tokens) {
      if (std::find(vowels.begin(), vowels.end(), token.vowel) == vowels.end()) continue;
      if (formant_count == 0) formant_count = token.formants.size();
      if (token.formants.size() != formant_count) {
        throw InvalidArgument("inconsistent formant counts: per-formant bands need every token "
                              "to carry the same number of formants");
      }
    }
  }
  if (formant_count == 0) throw InvalidArgument("no formants for the selected vowels");

  const Cells cells = collect_cells(records, vowels);
  std::vector<double> sums(formant_count, 0.0);
  std::size_t n = 0;
  for (const auto& speaker : cells) {
    for (const auto& cell : speaker) {
      if (cell.empty()) continue;
      for (std::size_t k = 0; k < formant_count; ++k) sums[k] += cell[k];
      ++n;
    }
  }
  std::vector<double> means;
  for (double s : sums) means.push_back(std::exp(s / static_cast<double>(n)));

  std::vector<double> bounds{means.front() / 2.0};
  for (std::size_t k = 0; k + 1 < means.size(); ++k) {
    bounds.push_back(std::sqrt(means[k] * means[k + 1]));
  }
  bounds.push_back(2.0 * means.back());
  return BandPartition(std::move(bounds));
}

ShiftMatrix::ShiftMatrix(std::vector<std::string> speaker_ids,
                         std::vector<std::string> band_labels)
    : speaker_ids_(std::move(speaker_ids)),
      band_labels_(std::move(band_labels)),
      values_(speaker_ids_.size() * band_labels_.size(), 0.0),
      mask_(speaker_ids_.size() * band_labels_.size(), 0) {}

std::size_t ShiftMatrix::available_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

double ShiftMatrix::rms() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!mask_[i]) continue;
    sum += values_[i] * values_[i];
    ++n;
  }
  return n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));
}

ShiftMatrix compute_shifts(const std::vector<SpeakerRecord>& records,
                           const std::vector<std::string>& vowels, const BandPartition& partition,
                           const Reference& reference) {
  require_vowels(records, vowels);
  const Cells cells = collect_cells(records, vowels);

  // Reference log frequency per (vowel, formant index).
  std::vector<std::vector<double>> ref(vowels.size());
  if (reference.is_grand_mean()) {
    for (std::size_t v = 0; v < vowels.size(); ++v) {
      std::vector<double> sums;
      std::vector<int> counts;
      for (const auto& speaker : cells) {
        const auto& cell = speaker[v];
        if (cell.size() > sums.size()) {
          sums.resize(cell.size(), 0.0);
          counts.resize(cell.size(), 0);
        }
        for (std::size_t k = 0; k < cell.size(); ++k) {
          sums[k] += cell[k];
          ++counts[k];
        }
      }
      for (std::size_t k = 0; k < sums.size(); ++k) sums[k] /= counts[k];
      ref[v] = std::move(sums);
    }
  } else {
    const auto it = std::find_if(records.begin(), records.end(), [&](const SpeakerRecord& r) {
      return r.speaker_id == reference.speaker_id();
    });
    if (it == records.end()) {
      throw InvalidArgument("reference speaker '" + reference.speaker_id() + "' is not in the corpus");
    }
    ref = cells[static_cast<std::size_t>(it - records.begin())];
  }

  std::vector<std::string> ids;
  for (const auto& r : records) ids.push_back(r.speaker_id);
  std::vector<std::string> labels;
  for (std::size_t l = 0; l < partition.band_count(); ++l) {
    labels.push_back("band" + std::to_string(l + 1));
  }
  ShiftMatrix shifts(std::move(ids), std::move(labels));

  // Band membership follows the reference frequency, never the speaker's own.
  std::vector<std::vector<int>> band(vowels.size());
  for (std::size_t v = 0; v < vowels.size(); ++v) {
    for (double log_ref : ref[v]) band[v].push_back(partition.band_of(std::exp(log_ref)));
  }

  const std::size_t bands = partition.band_count();
  for (std::size_t a = 0; a < records.size(); ++a) {
    std::vector<double> sum(bands, 0.0);
    std::vector<int> count(bands, 0);
    for (std::size_t v = 0; v < vowels.size(); ++v) {
      const auto& cell = cells[a][v];
      for (std::size_t k = 0; k < cell.size() && k < ref[v].size(); ++k) {
        const int l = band[v][k];
        if (l < 0) continue;
        sum[static_cast<std::size_t>(l)] += cell[k] - ref[v][k];
        ++count[static_cast<std::size_t>(l)];
      }
    }
    for (std::size_t l = 0; l < bands; ++l) {
      if (count[l] > 0) shifts.set(a, l, sum[l] / count[l]);
    }
  }
  return shifts;
}

Rank1Result rank1_factor(const ShiftMatrix& shifts, const Rank1Options& options) {
  const std::size_t rows = shifts.rows();
  const std::size_t cols = shifts.cols();
  if (options.max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
  if (!(options.tol >= 0.0)) throw InvalidArgument("tol must be non-negative");

  std::size_t populated_cols = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    bool any = false;
    for (std::size_t r = 0; r < rows && !any; ++r) any = shifts.available(r, c);
    if (!any) {
      throw DegenerateInput("band '" + shifts.band_labels()[c] +
                            "' has no data; its exponent is unidentifiable");
    }
    ++populated_cols;
  }
  std::size_t signal_rows = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (shifts.available(r, c) && std::abs(shifts(r, c)) > kNoVariationRms) {
        ++signal_rows;
        break;
      }
    }
  }
  if (populated_cols < 2) throw DegenerateInput("need at least two bands with data");
  if (shifts.rms() < kNoVariationRms) throw DegenerateInput("no speaker variation in the shift matrix");
  if (signal_rows < 2) throw DegenerateInput("need at least two speakers with nonzero shifts");

  Rank1Result result;
  auto& betas = result.betas;
  auto& factors = result.speaker_factors;
  betas.assign(cols, 1.0);
  factors.assign(rows, 0.0);

  const double start = objective(shifts, betas, factors);
  result.objective_history.push_back(start);
  double previous = start;
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    for (std::size_t r = 0; r < rows; ++r) {
      double num = 0.0, den = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!shifts.available(r, c)) continue;
        num += betas[c] * shifts(r, c);
        den += betas[c] * betas[c];
      }
      factors[r] = den > 0.0 ? num / den : 0.0;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double num = 0.0, den = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        if (!shifts.available(r, c)) continue;
        num += factors[r] * shifts(r, c);
        den += factors[r] * factors[r];
      }
      if (den > 0.0) betas[c] = num / den;
    }
    const double current = objective(shifts, betas, factors);
    result.objective_history.push_back(current);
    result.iterations = iter;
    if (current <= 1e-30 * start || std::abs(previous - current) <= options.tol * previous) {
      result.converged = true;
      break;
    }
    previous = current;
  }

  double mean = 0.0;
  for (double b : betas) mean += b;
  mean /= static_cast<double>(cols);
  if (!(std::abs(mean) > 0.0) || !std::isfinite(mean)) {
    throw EstimationError("band exponents average to zero; the scale is unidentifiable");
  }
  // Dividing by a negative mean also fixes the sign so that sum(beta) > 0.
  for (double& b : betas) b /= mean;
  for (double& f : factors) f *= mean;

  result.residual_rms =
      std::sqrt(objective(shifts, betas, factors) / static_cast<double>(shifts.available_count()));
  return result;
}

ScaleEstimate estimate_scale(const std::vector<SpeakerRecord>& records,
                             const std::vector<std::string>& vowels,
                             const PartitionMode& partition_mode, const Reference& reference,
                             const Rank1Options& options) {
  ScaleEstimate estimate;
  estimate.partition = choose_partition(records, vowels, partition_mode);
  estimate.shifts = compute_shifts(records, vowels, estimate.partition, reference);
  Rank1Result factors = rank1_factor(estimate.shifts, options);
  for (std::size_t l = 0; l < factors.betas.size(); ++l) {
    if (!(factors.betas[l] > 0.0)) {
      throw EstimationError("estimated exponent for band " + std::to_string(l + 1) +
                            " is not positive; the scale would not be monotone");
    }
  }
  estimate.betas = std::move(factors.betas);
  estimate.speaker_ids = estimate.shifts.speaker_ids();
  estimate.speaker_factors = std::move(factors.speaker_factors);
  estimate.residual_rms = factors.residual_rms;
  estimate.converged = factors.converged;
  estimate.iterations = factors.iterations;
  estimate.warp = build_piecewise(estimate.betas, estimate.partition);
  estimate.vowels = vowels;
  estimate.reference = reference;
  estimate.options = options;
  return estimate;
}

}  // namespace speechscale
