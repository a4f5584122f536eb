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

#include <algorithm>
#include <cmath>
#include <set>

#include "speechscale/error.hpp"

namespace speechscale {
namespace {

constexpr int kCoarseScanPoints = 49;

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = 0.0;
};

// Least squares y ~ slope * x (+ intercept when with_intercept).
template <class XFn, class YFn>
LinearFit fit_line(std::size_t n, XFn x_at, YFn y_at, bool with_intercept) {
  LinearFit fit;
  if (with_intercept) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += x_at(i);
      my += y_at(i);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = x_at(i) - mx;
      sxx += dx * dx;
      sxy += dx * (y_at(i) - my);
    }
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
  } else {
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += x_at(i) * x_at(i);
      sxy += x_at(i) * y_at(i);
    }
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y_at(i) - (fit.slope * x_at(i) + fit.intercept);
    fit.sse += e * e;
  }
  return fit;
}

LinearFit fit_at(std::span<const MelSample> samples, double b, bool calibrate) {
  return fit_line(
      samples.size(), [&](std::size_t i) { return std::log10(1.0 + samples[i].f / b); },
      [&](std::size_t i) { return samples[i].nu; }, calibrate);
}

}  // namespace

double mel_eval(const MelParams& params, double f) {
  if (!(f >= 0.0)) throw InvalidArgument("mel_eval needs f >= 0");
  if (!(params.b > 0.0)) throw InvalidArgument("mel corner frequency b must be positive");
  return params.a * std::log10(1.0 + f / params.b);
}

double mel_fit_residual(std::span<const MelSample> samples, double b, bool calibrate) {
  if (!(b > 0.0)) throw InvalidArgument("mel corner frequency b must be positive");
  return fit_at(samples, b, calibrate).sse;
}

MelFitResult fit_mel(std::span<const MelSample> samples, const MelFitOptions& options) {
  auto [b_lo, b_hi] = options.b_range;
  if (!(b_lo > 0.0) || !(b_hi > b_lo) || !std::isfinite(b_hi)) {
    throw InvalidArgument("b range must satisfy 0 < b_min < b_max");
  }
  if (!(options.rel_tol > 0.0)) throw InvalidArgument("rel_tol must be positive");
  std::set<double> distinct;
  double nu_min = 0.0, nu_max = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!(s.f >= 0.0) || !std::isfinite(s.f) || !std::isfinite(s.nu)) {
      throw InvalidArgument("mel fit samples need finite f >= 0 and finite nu");
    }
    distinct.insert(s.f);
    nu_min = i == 0 ? s.nu : std::min(nu_min, s.nu);
    nu_max = i == 0 ? s.nu : std::max(nu_max, s.nu);
  }
  if (distinct.size() < 3) throw InvalidArgument("mel fit needs at least 3 distinct frequencies");
  if (nu_min == nu_max) throw InvalidArgument("all-equal nu samples; nothing to fit");

  // Work in ln b so the tolerance is relative.
  const auto cost = [&](double log_b) {
    return mel_fit_residual(samples, std::exp(log_b), options.calibrate);
  };
  const double lo = std::log(b_lo);
  const double hi = std::log(b_hi);
  const double step = (hi - lo) / (kCoarseScanPoints - 1);
  int best = 0;
  double best_cost = cost(lo);
  for (int i = 1; i < kCoarseScanPoints; ++i) {
    const double c = cost(lo + i * step);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  double left = lo + std::max(best - 1, 0) * step;
  double right = lo + std::min(best + 1, kCoarseScanPoints - 1) * step;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = right - inv_phi * (right - left);
  double x2 = left + inv_phi * (right - left);
  double c1 = cost(x1);
  double c2 = cost(x2);
  while (right - left > options.rel_tol) {
    if (c1 <= c2) {
      right = x2;
      x2 = x1;
      c2 = c1;
      x1 = right - inv_phi * (right - left);
      c1 = cost(x1);
    } else {
      left = x1;
      x1 = x2;
      c1 = c2;
      x2 = left + inv_phi * (right - left);
      c2 = cost(x2);
    }
  }
  double log_b = 0.5 * (left + right);
  // The bracket edges are clamped to the range; keep whichever is lowest.
  for (double candidate : {lo, hi}) {
    if (cost(candidate) < cost(log_b)) log_b = candidate;
  }
  const double b = std::exp(log_b);
  const LinearFit fit = fit_at(samples, b, options.calibrate);

  MelFitResult result;
  if (options.calibrate) {
    if (fit.slope == 0.0) throw InvalidArgument("samples carry no mel-shaped trend to calibrate");
    const double a = 1000.0 / std::log10(1.0 + 1000.0 / b);
    const double gain = a / fit.slope;
    result.affine = {gain, -fit.intercept * gain};
    result.params = {a, b};
  } else {
    result.params = {fit.slope, b};
  }

  double mean = 0.0;
  for (const auto& s : samples) mean += result.affine(s.nu);
  mean /= static_cast<double>(samples.size());
  double sse = 0.0, sst = 0.0;
  for (const auto& s : samples) {
    const double y = result.affine(s.nu);
    const double e = y - mel_eval(result.params, s.f);
    sse += e * e;
    sst += (y - mean) * (y - mean);
  }
  result.r_squared = 1.0 - sse / sst;
  result.rms_error = std::sqrt(sse / static_cast<double>(samples.size()));
  return result;
}

ScaleComparison compare_scales(const WarpFunction& warp, const MelParams& params,
                               std::span<const double> grid) {
  if (grid.empty()) throw InvalidArgument("comparison grid is empty");
  std::vector<double> nu;
  std::vector<double> eta;
  for (double f : grid) {
    nu.push_back(warp.eval(f));
    eta.push_back(mel_eval(params, f));
  }
  const LinearFit fit = fit_line(
      grid.size(), [&](std::size_t i) { return nu[i]; }, [&](std::size_t i) { return eta[i]; },
      true);
  if (fit.slope == 0.0) {
    throw InvalidArgument("warp is constant over the comparison grid; cannot calibrate");
  }
  ScaleComparison out;
  out.affine = {fit.slope, fit.intercept};
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ScaleComparisonRow row{grid[i], out.affine(nu[i]), eta[i], 0.0};
    row.deviation = row.nu_calibrated - row.eta_mel;
    sum_sq += row.deviation * row.deviation;
    out.max_deviation = std::max(out.max_deviation, std::abs(row.deviation));
    out.table.push_back(row);
  }
  out.rms_deviation = std::sqrt(sum_sq / static_cast<double>(grid.size()));
  return out;
}

std::vector<double> log_spaced_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw InvalidArgument("grid needs 0 < lo < hi");
  }
  if (n < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<double> grid;
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid.push_back(lo * std::exp(i * step));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace speechscale
