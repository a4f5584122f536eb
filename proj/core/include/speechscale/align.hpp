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
#include <vector>

#include "speechscale/estimate.hpp"
#include "speechscale/warp.hpp"

namespace speechscale {

struct AlignmentResult {
  std::string vowel;
  std::string warp_name;
  std::vector<std::string> speaker_ids;
  // Per speaker, per formant index. Raw values are geometric token means;
  // warped values are arithmetic means of the warped tokens.
  std::vector<std::vector<double>> formants_raw_hz;
  std::vector<std::vector<double>> formants_warped;
  std::vector<double> target;        // grand mean per formant index
  std::vector<double> translations;  // alpha per speaker; sums to zero
  // Population standard deviation across speakers, per formant index,
  // before and after translating each speaker by its alpha.
  std::vector<double> spread_before;
  std::vector<double> spread_after;
  // spread_before / spread_after; +inf when the translated spread is 0.
  std::vector<double> improvement_ratio;
};

// alpha_A = mean_k (target_k - warped_A,k), the least-squares translation of
// each speaker onto the target.
std::vector<double> best_translation(const std::vector<std::vector<double>>& warped,
                                     std::span<const double> target);

// Aligns already-warped per-speaker formants against their grand mean.
AlignmentResult align_warped(std::vector<std::string> speaker_ids,
                             std::vector<std::vector<double>> warped);

// Warps every speaker's tokens of `vowel`, averages per formant index and
// aligns. Speakers without the vowel are left out.
AlignmentResult align_population(const std::vector<SpeakerRecord>& records,
                                 const WarpFunction& warp, const std::string& vowel);

}  // namespace speechscale
