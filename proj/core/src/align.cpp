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

#include "speechscale/align.hpp"

#include <cmath>
#include <limits>

#include "speechscale/error.hpp"

namespace speechscale {
namespace {

std::vector<double> column_spread(const std::vector<std::vector<double>>& rows,
                                  std::span<const double> shift) {
  const std::size_t k_count = rows.front().size();
  const auto n = static_cast<double>(rows.size());
  std::vector<double> spread(k_count, 0.0);
  for (std::size_t k = 0; k < k_count; ++k) {
    double mean = 0.0;
    for (std::size_t a = 0; a < rows.size(); ++a) mean += rows[a][k] + shift[a];
    mean /= n;
    double ss = 0.0;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const double d = rows[a][k] + shift[a] - mean;
      ss += d * d;
    }
    spread[k] = std::sqrt(ss / n);
  }
  return spread;
}

}  // namespace

std::vector<double> best_translation(const std::vector<std::vector<double>>& warped,
                                     std::span<const double> target) {
  if (warped.empty() || target.empty()) throw InvalidArgument("nothing to align");
  std::vector<double> alpha;
  alpha.reserve(warped.size());
  for (const auto& speaker : warped) {
    if (speaker.size() != target.size()) {
      throw InvalidArgument("speaker formant indices do not match the alignment target");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < target.size(); ++k) sum += target[k] - speaker[k];
    alpha.push_back(sum / static_cast<double>(target.size()));
  }
  return alpha;
}

AlignmentResult align_warped(std::vector<std::string> speaker_ids,
                             std::vector<std::vector<double>> warped) {
  if (warped.empty() || warped.front().empty()) throw InvalidArgument("nothing to align");
  if (speaker_ids.size() != warped.size()) throw InvalidArgument("speaker id count mismatch");
  const std::size_t k_count = warped.front().size();
  for (const auto& row : warped) {
    if (row.size() != k_count) {
      throw InvalidArgument("speakers expose different numbers of formants");
    }
  }

  AlignmentResult result;
  result.speaker_ids = std::move(speaker_ids);
  result.target.assign(k_count, 0.0);
  for (const auto& row : warped) {
    for (std::size_t k = 0; k < k_count; ++k) result.target[k] += row[k];
  }
  for (double& t : result.target) t /= static_cast<double>(warped.size());

  result.translations = best_translation(warped, result.target);
  const std::vector<double> no_shift(warped.size(), 0.0);
  result.spread_before = column_spread(warped, no_shift);
  result.spread_after = column_spread(warped, result.translations);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double before = result.spread_before[k];
    const double after = result.spread_after[k];
    double ratio = 1.0;
    if (after > 0.0) {
      ratio = before / after;
    } else if (before > 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    result.improvement_ratio.push_back(ratio);
  }
  result.formants_warped = std::move(warped);
  return result;
}

AlignmentResult align_population(const std::vector<SpeakerRecord>& records,
                                 const WarpFunction& warp, const std::string& vowel) {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> raw;
  std::vector<std::vector<double>> warped;
  for (const auto& record : records) {
    std::vector<double> sum;
    int tokens = 0;
    for (const auto& token : record.tokens) {
      if (token.vowel != vowel) continue;
      if (tokens > 0 && token.formants.size() != sum.size()) {
        throw InvalidArgument("speaker '" + record.speaker_id +
                              "' has tokens with different formant counts");
      }
      sum.resize(token.formants.size(), 0.0);
      const auto nu = warp_formants(token, warp);
      for (std::size_t k = 0; k < nu.size(); ++k) sum[k] += nu[k];
      ++tokens;
    }
    if (tokens == 0) continue;
    for (double& s : sum) s /= tokens;
    ids.push_back(record.speaker_id);
    raw.push_back(mean_log_formants(record, vowel));
    for (double& f : raw.back()) f = std::exp(f);
    warped.push_back(std::move(sum));
  }
  if (ids.empty()) throw InvalidArgument("vowel '" + vowel + "' is not in the corpus");

  AlignmentResult result = align_warped(std::move(ids), std::move(warped));
  result.vowel = vowel;
  result.warp_name = warp.name();
  result.formants_raw_hz = std::move(raw);
  return result;
}

}  // namespace speechscale
