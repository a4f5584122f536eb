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

#include <cstddef>
#include <string>
#include <vector>

#include "speechscale/acoustic.hpp"
#include "speechscale/warp.hpp"

namespace speechscale {

// All tokens one speaker produced, across vowels and repetitions.
struct SpeakerRecord {
  std::string speaker_id;
  std::string group;  // "" when unknown
  std::vector<FormantSet> tokens;

  friend bool operator==(const SpeakerRecord&, const SpeakerRecord&) = default;
};

// Per-index mean of ln f over the speaker's tokens of `vowel`. The result has
// as many entries as the longest such token; empty if the vowel is absent.
std::vector<double> mean_log_formants(const SpeakerRecord& record, const std::string& vowel);

// Who the log-frequency shifts are measured against.
class Reference {
 public:
  static Reference grand_mean() { return Reference(); }
  static Reference speaker(std::string id) {
    Reference r;
    r.speaker_ = std::move(id);
    return r;
  }
  bool is_grand_mean() const { return speaker_.empty(); }
  const std::string& speaker_id() const { return speaker_; }
  std::string label() const { return is_grand_mean() ? "grand-mean" : speaker_; }

  friend bool operator==(const Reference&, const Reference&) = default;

 private:
  std::string speaker_;
};

struct PartitionMode {
  enum class Kind { kPerFormantIndex, kExplicit };
  Kind kind = Kind::kPerFormantIndex;
  std::vector<double> boundaries;  // only for kExplicit

  static PartitionMode per_formant_index() { return {}; }
  static PartitionMode explicit_bounds(std::vector<double> b) {
    return {Kind::kExplicit, std::move(b)};
  }
  friend bool operator==(const PartitionMode&, const PartitionMode&) = default;
};

// Per-formant-index mode: one band per formant index, interior edges at the
// geometric midpoints of adjacent grand-mean formants, outer edges at m_1 / 2
// and 2 m_K. Grand means are exp(mean ln f) over all (speaker, vowel) cells.
BandPartition choose_partition(const std::vector<SpeakerRecord>& records,
                               const std::vector<std::string>& vowels, const PartitionMode& mode);

// Speakers x bands matrix of mean log-frequency shifts (nepers), row-major.
class ShiftMatrix {
 public:
  ShiftMatrix() = default;
  ShiftMatrix(std::vector<std::string> speaker_ids, std::vector<std::string> band_labels);

  std::size_t rows() const { return speaker_ids_.size(); }
  std::size_t cols() const { return band_labels_.size(); }
  const std::vector<std::string>& speaker_ids() const { return speaker_ids_; }
  const std::vector<std::string>& band_labels() const { return band_labels_; }

  bool available(std::size_t r, std::size_t c) const { return mask_[r * cols() + c] != 0; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  void set(std::size_t r, std::size_t c, double value) {
    values_[r * cols() + c] = value;
    mask_[r * cols() + c] = 1;
  }
  void clear(std::size_t r, std::size_t c) {
    values_[r * cols() + c] = 0.0;
    mask_[r * cols() + c] = 0;
  }

  std::size_t available_count() const;
  // RMS over available entries; 0 when none are available.
  double rms() const;

 private:
  std::vector<std::string> speaker_ids_;
  std::vector<std::string> band_labels_;
  std::vector<double> values_;
  std::vector<unsigned char> mask_;
};

// delta(A, l) = mean over (vowel, formant index) cells whose REFERENCE
// frequency lies in band l of ln f_A - ln f_ref. Tokens are first averaged in
// the log domain per (speaker, vowel, formant index).
ShiftMatrix compute_shifts(const std::vector<SpeakerRecord>& records,
                           const std::vector<std::string>& vowels, const BandPartition& partition,
                           const Reference& reference);

struct Rank1Options {
  int max_iters = 500;
  double tol = 1e-12;

  friend bool operator==(const Rank1Options&, const Rank1Options&) = default;
};

struct Rank1Result {
  std::vector<double> betas;            // mean 1
  std::vector<double> speaker_factors;  // c_A, nepers
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
  // Objective (sum of squared residuals over available entries) at the
  // start (c = 0) and after every full alternation.
  std::vector<double> objective_history;
};

// Masked alternating least squares for delta(A, l) ~ beta_l * c_A, started
// from beta = 1. Throws DegenerateInput for fewer than two usable bands or
// speakers, or when the matrix RMS is below 1e-12.
Rank1Result rank1_factor(const ShiftMatrix& shifts, const Rank1Options& options = {});

struct ScaleEstimate {
  std::vector<double> betas;
  std::vector<std::string> speaker_ids;
  std::vector<double> speaker_factors;
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
  BandPartition partition;
  PiecewiseWarp warp;
  ShiftMatrix shifts;
  // Provenance.
  std::vector<std::string> vowels;
  Reference reference;
  Rank1Options options;
};

// choose_partition -> compute_shifts -> rank1_factor -> build_piecewise.
// Throws EstimationError if any estimated beta is not positive.
ScaleEstimate estimate_scale(const std::vector<SpeakerRecord>& records,
                             const std::vector<std::string>& vowels,
                             const PartitionMode& partition_mode,
                             const Reference& reference = Reference::grand_mean(),
                             const Rank1Options& options = {});

}  // namespace speechscale
