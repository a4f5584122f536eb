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

#include "speechscale/warp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "speechscale/error.hpp"

namespace speechscale {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void out_of_domain(double f, std::pair<double, double> domain) {
  std::ostringstream msg;
  msg << "frequency " << f << " Hz is outside the warp domain [" << domain.first << ", "
      << domain.second << "]";
  throw InvalidArgument(msg.str());
}

double quadratic_log_floor(const QuadraticLogWarp& w) {
  if (w.quadratic == 0.0) return 0.0;
  return std::exp(-w.linear / (2.0 * w.quadratic));
}

}  // namespace

BandPartition::BandPartition(std::vector<double> boundaries) : boundaries_(std::move(boundaries)) {
  if (boundaries_.size() < 2) throw InvalidArgument("a band partition needs at least two boundaries");
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    const double b = boundaries_[i];
    if (!std::isfinite(b) || b <= 0.0) throw InvalidArgument("band boundaries must be positive");
    if (i > 0 && !(b > boundaries_[i - 1])) {
      throw InvalidArgument("band boundaries must be strictly ascending");
    }
  }
}

int BandPartition::band_of(double f) const {
  if (boundaries_.size() < 2 || !(f >= lower()) || !(f <= upper())) return -1;
  if (f == upper()) return static_cast<int>(band_count()) - 1;
  const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), f);
  return static_cast<int>(it - boundaries_.begin()) - 1;
}

PiecewiseWarp build_piecewise(std::span<const double> betas, const BandPartition& partition) {
  if (partition.band_count() == 0) throw InvalidArgument("empty band partition");
  if (betas.size() != partition.band_count()) {
    throw InvalidArgument("got " + std::to_string(betas.size()) + " band exponents for " +
                          std::to_string(partition.band_count()) + " bands");
  }
  PiecewiseWarp warp;
  warp.partition_ = partition;
  warp.betas_.assign(betas.begin(), betas.end());
  for (double beta : betas) {
    if (!std::isfinite(beta) || beta <= 0.0) {
      throw InvalidArgument("band exponents must be positive");
    }
    warp.slopes_.push_back(1.0 / beta);
  }
  for (double b : partition.boundaries()) warp.log_bounds_.push_back(std::log(b));
  warp.offsets_.push_back(0.0);
  for (std::size_t l = 0; l < warp.slopes_.size(); ++l) {
    warp.offsets_.push_back(warp.offsets_[l] +
                            warp.slopes_[l] * (warp.log_bounds_[l + 1] - warp.log_bounds_[l]));
  }
  return warp;
}

double PiecewiseWarp::eval(double f, bool extended) const {
  if (!std::isfinite(f) || f <= 0.0) out_of_domain(f, {partition_.lower(), partition_.upper()});
  const double log_f = std::log(f);
  int band = partition_.band_of(f);
  if (band < 0) {
    if (!extended) out_of_domain(f, {partition_.lower(), partition_.upper()});
    band = f < partition_.lower() ? 0 : static_cast<int>(slopes_.size()) - 1;
  }
  const auto l = static_cast<std::size_t>(band);
  return offsets_[l] + slopes_[l] * (log_f - log_bounds_[l]);
}

double PiecewiseWarp::invert(double nu, bool extended) const {
  const auto& bounds = partition_.boundaries();
  const std::size_t bands = slopes_.size();
  if (!std::isfinite(nu)) throw InvalidArgument("cannot invert a non-finite scale value");
  std::size_t l = 0;
  if (nu < offsets_.front() || nu > offsets_.back()) {
    if (!extended) {
      std::ostringstream msg;
      msg << "scale value " << nu << " is outside the warp range [" << offsets_.front() << ", "
          << offsets_.back() << "]";
      throw InvalidArgument(msg.str());
    }
    l = nu < offsets_.front() ? 0 : bands - 1;
  } else {
    if (nu == offsets_.back()) return bounds.back();
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), nu);
    l = std::min<std::size_t>(static_cast<std::size_t>(it - offsets_.begin()) - 1, bands - 1);
    if (nu == offsets_[l]) return bounds[l];
  }
  return std::exp(log_bounds_[l] + (nu - offsets_[l]) / slopes_[l]);
}

WarpKind WarpFunction::kind() const {
  return std::visit(Overloaded{[](const LogWarp&) { return WarpKind::kLog; },
                               [](const QuadraticLogWarp&) { return WarpKind::kDemoQuadraticLog; },
                               [](const PiecewiseWarp&) { return WarpKind::kPiecewise; },
                               [](const IdentityWarp&) { return WarpKind::kIdentity; }},
                    impl_);
}

std::string WarpFunction::name() const {
  switch (kind()) {
    case WarpKind::kLog: return "log";
    case WarpKind::kDemoQuadraticLog: return "demo_quadratic_log";
    case WarpKind::kPiecewise: return "piecewise";
    case WarpKind::kIdentity: return "identity";
  }
  return "unknown";
}

std::pair<double, double> WarpFunction::domain() const {
  return std::visit(
      Overloaded{[](const LogWarp&) { return std::pair{0.0, kInf}; },
                 [](const IdentityWarp&) { return std::pair{0.0, kInf}; },
                 [](const QuadraticLogWarp& w) { return std::pair{quadratic_log_floor(w), kInf}; },
                 [this](const PiecewiseWarp& w) {
                   return extended_ ? std::pair{0.0, kInf}
                                    : std::pair{w.partition().lower(), w.partition().upper()};
                 }},
      impl_);
}

bool WarpFunction::in_domain(double f) const {
  if (!std::isfinite(f) || f <= 0.0) return false;
  const auto [lo, hi] = domain();
  if (kind() == WarpKind::kPiecewise && !extended_) return f >= lo && f <= hi;
  return f > lo && f < hi;
}

double WarpFunction::eval(double f) const {
  if (!in_domain(f)) out_of_domain(f, domain());
  return std::visit(Overloaded{[f](const LogWarp&) { return std::log(f); },
                               [f](const IdentityWarp&) { return f; },
                               [f](const QuadraticLogWarp& w) {
                                 const double x = std::log(f);
                                 return w.linear * x + w.quadratic * x * x;
                               },
                               [f, this](const PiecewiseWarp& w) { return w.eval(f, extended_); }},
                    impl_);
}

double WarpFunction::invert(double nu) const {
  if (!std::isfinite(nu)) throw InvalidArgument("cannot invert a non-finite scale value");
  return std::visit(
      Overloaded{[nu](const LogWarp&) { return std::exp(nu); },
                 [nu](const IdentityWarp&) {
                   if (nu <= 0.0) throw InvalidArgument("identity warp range is (0, inf)");
                   return nu;
                 },
                 [nu](const QuadraticLogWarp& w) {
                   if (w.quadratic == 0.0) return std::exp(nu / w.linear);
                   const double disc = w.linear * w.linear + 4.0 * w.quadratic * nu;
                   if (!(disc > 0.0)) {
                     throw InvalidArgument("scale value is below the quadratic-log warp range");
                   }
                   // Positive root of q x^2 + lin x - nu = 0, written without
                   // the cancellation of (-lin + sqrt(disc)) / 2q.
                   return std::exp(2.0 * nu / (w.linear + std::sqrt(disc)));
                 },
                 [nu, this](const PiecewiseWarp& w) { return w.invert(nu, extended_); }},
      impl_);
}

std::vector<double> warp_formants(const FormantSet& set, const WarpFunction& warp) {
  std::vector<double> warped;
  warped.reserve(set.formants.size());
  for (double f : set.formants) warped.push_back(warp.eval(f));
  return warped;
}

}  // namespace speechscale
