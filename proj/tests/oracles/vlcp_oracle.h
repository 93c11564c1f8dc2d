// Copyright (c) 2026 The docrestore Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Brute-force candidate scorer. Walks the label union and scans both lists
// linearly for each label.

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace docrestore::oracle {

struct OracleWeights {
  double w_o, w_l, alpha, beta;
  int k;
};

struct OracleScore {
  std::string label;
  double p_o, p_l;
  int r_o, r_l;
  double composite;
};

inline std::optional<std::pair<int, double>> locate(const std::vector<std::pair<std::string, double>>& list,
                                                    const std::string& label, int k) {
  for (int i = 0; i < static_cast<int>(list.size()) && i < k; ++i) {
    if (list[static_cast<std::size_t>(i)].first == label) return std::make_pair(i, list[static_cast<std::size_t>(i)].second);
  }
  return std::nullopt;
}

inline OracleScore score_label(const std::string& label, const std::vector<std::pair<std::string, double>>& ocr,
                               const std::vector<std::pair<std::string, double>>& lm, const OracleWeights& w) {
  const auto in_o = locate(ocr, label, w.k);
  const auto in_l = locate(lm, label, w.k);
  OracleScore s{label, in_o ? in_o->second : 0.0, in_l ? in_l->second : 0.0,
                in_o ? in_o->first : w.k, in_l ? in_l->first : w.k, 0.0};
  const double multiplier = (in_o && in_l) ? w.beta : 1.0;
  s.composite = (w.w_o * s.p_o + w.w_l * s.p_l + w.alpha * (2 * w.k - s.r_o - s.r_l)) * multiplier;
  return s;
}

inline std::vector<OracleScore> score_union(const std::vector<std::pair<std::string, double>>& ocr,
                                            const std::vector<std::pair<std::string, double>>& lm,
                                            const OracleWeights& w) {
  std::vector<std::string> labels;
  auto add = [&](const std::vector<std::pair<std::string, double>>& list) {
    for (int i = 0; i < static_cast<int>(list.size()) && i < w.k; ++i) {
      const auto& l = list[static_cast<std::size_t>(i)].first;
      bool seen = false;
      for (const auto& x : labels) seen = seen || x == l;
      if (!seen) labels.push_back(l);
    }
  };
  add(ocr);
  add(lm);
  std::vector<OracleScore> out;
  for (const auto& l : labels) out.push_back(score_label(l, ocr, lm, w));
  return out;
}

// a beats b: higher composite, then higher OCR probability, then smaller label.
inline bool beats(const OracleScore& a, const OracleScore& b) {
  if (a.composite > b.composite) return true;
  if (a.composite < b.composite) return false;
  if (a.p_o > b.p_o) return true;
  if (a.p_o < b.p_o) return false;
  return a.label < b.label;
}

// Label that no other label beats; found by pairwise comparison.
inline std::string argmax_label(const std::vector<OracleScore>& scores) {
  for (const auto& a : scores) {
    bool champion = true;
    for (const auto& b : scores) {
      if (&a != &b && beats(b, a)) champion = false;
    }
    if (champion) return a.label;
  }
  return {};
}

}  // namespace docrestore::oracle
