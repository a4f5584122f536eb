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
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "speechscale/acoustic.hpp"

namespace speechscale {

// Ascending band edges b0 < b1 < ... < bL in Hz, b0 > 0. Band l covers
// [b_{l-1}, b_l].
class BandPartition {
 public:
  BandPartition() = default;
  // Throws InvalidArgument unless there are >= 2 strictly ascending positive
  // finite boundaries.
  explicit BandPartition(std::vector<double> boundaries);

  const std::vector<double>& boundaries() const { return boundaries_; }
  std::size_t band_count() const { return boundaries_.empty() ? 0 : boundaries_.size() - 1; }
  double lower() const { return boundaries_.front(); }
  double upper() const { return boundaries_.back(); }

  // Index of the band containing f, or -1 outside [b0, bL]. Interior
  // boundaries belong to the band above them.
  int band_of(double f) const;

  friend bool operator==(const BandPartition&, const BandPartition&) = default;

 private:
  std::vector<double> boundaries_;
};

// Continuous piecewise-log scale. Inside band l
//
//   nu(f) = offset_l + (ln f - ln b_{l-1}) / beta_l
//
// with offset_0 = 0 so that nu(b0) = 0, and each offset chained from the end
// value of the band below.
class PiecewiseWarp {
 public:
  PiecewiseWarp() = default;

  const BandPartition& partition() const { return partition_; }
  const std::vector<double>& betas() const { return betas_; }
  const std::vector<double>& slopes() const { return slopes_; }
  const std::vector<double>& offsets() const { return offsets_; }
  double anchor_hz() const { return partition_.lower(); }

  // When extended, the first and last slopes continue below b0 and above bL.
  double eval(double f, bool extended = false) const;
  double invert(double nu, bool extended = false) const;

  friend bool operator==(const PiecewiseWarp& a, const PiecewiseWarp& b) {
    return a.partition_ == b.partition_ && a.betas_ == b.betas_;
  }

 private:
  friend PiecewiseWarp build_piecewise(std::span<const double> betas,
                                       const BandPartition& partition);

  BandPartition partition_;
  std::vector<double> betas_;
  std::vector<double> slopes_;
  std::vector<double> log_bounds_;
  // offsets_[l] is nu at the lower edge of band l; offsets_.back() is nu(bL).
  std::vector<double> offsets_;
};

// Throws InvalidArgument on non-positive betas or a band-count mismatch.
PiecewiseWarp build_piecewise(std::span<const double> betas, const BandPartition& partition);

// nu = ln f.
struct LogWarp {};

// nu = linear * ln f + quadratic * (ln f)^2, the illustrative demo warp
// (natural log). Increasing for ln f > -linear / (2 quadratic).
struct QuadraticLogWarp {
  double linear = 0.9;
  double quadratic = 0.6;
};

// nu = f; raw-frequency baseline.
struct IdentityWarp {};

enum class WarpKind { kLog, kDemoQuadraticLog, kPiecewise, kIdentity };

class WarpFunction {
 public:
  using Variant = std::variant<LogWarp, QuadraticLogWarp, PiecewiseWarp, IdentityWarp>;

  WarpFunction(Variant impl = LogWarp{}, bool extended = false)
      : impl_(std::move(impl)), extended_(extended) {}

  static WarpFunction log() { return WarpFunction(LogWarp{}); }
  static WarpFunction demo() { return WarpFunction(QuadraticLogWarp{}); }
  static WarpFunction identity() { return WarpFunction(IdentityWarp{}); }
  static WarpFunction piecewise(PiecewiseWarp warp, bool extended = false) {
    return WarpFunction(std::move(warp), extended);
  }

  WarpKind kind() const;
  std::string name() const;
  const Variant& impl() const { return impl_; }
  bool extended() const { return extended_; }

  // Open domain (f_min, f_max) in Hz; piecewise domains are closed at the
  // partition edges.
  std::pair<double, double> domain() const;
  bool in_domain(double f) const;

  // Throw InvalidArgument outside the domain / range.
  double eval(double f) const;
  double invert(double nu) const;

 private:
  Variant impl_;
  bool extended_ = false;
};

// Elementwise eval; order is preserved.
std::vector<double> warp_formants(const FormantSet& set, const WarpFunction& warp);

}  // namespace speechscale
