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

// Greedy detection matching, written as repeated selection instead of a
// sort: pick the unprocessed prediction with the highest confidence (lowest
// index on ties), then the free ground-truth box with the highest overlap
// (lowest index on ties).

#include <vector>

#include "docrestore/core/geometry.h"
#include "fusion_oracle.h"

namespace docrestore::oracle {

struct OracleDetection {
  double precision = 0, recall = 0, f1 = 0;
  std::size_t matched = 0;
};

inline OracleDetection greedy_detection(const std::vector<BBox>& preds, const std::vector<double>& conf,
                                        const std::vector<BBox>& gts, double threshold) {
  std::vector<bool> done(preds.size(), false), used(gts.size(), false);
  OracleDetection r;
  for (std::size_t round = 0; round < preds.size(); ++round) {
    std::size_t p = preds.size();
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (!done[i] && (p == preds.size() || conf[i] > conf[p])) p = i;
    }
    done[p] = true;
    std::size_t g = gts.size();
    double best = 0;
    for (std::size_t j = 0; j < gts.size(); ++j) {
      const double v = box_overlap_ratio(preds[p], gts[j]);
      if (!used[j] && v >= threshold && (g == gts.size() || v > best)) {
        g = j;
        best = v;
      }
    }
    if (g < gts.size()) {
      used[g] = true;
      ++r.matched;
    }
  }
  if (!preds.empty()) r.precision = static_cast<double>(r.matched) / static_cast<double>(preds.size());
  if (!gts.empty()) r.recall = static_cast<double>(r.matched) / static_cast<double>(gts.size());
  if (r.precision + r.recall > 0) r.f1 = 2 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

}  // namespace docrestore::oracle
