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

// Brute-force box fusion. Shares nothing with the library beyond BBox.

#include <algorithm>
#include <vector>

#include "docrestore/core/geometry.h"

namespace docrestore::oracle {

inline double box_overlap_ratio(const BBox& a, const BBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0 || h <= 0) return 0.0;
  const double inter = w * h;
  const double area_a = (a.x_max - a.x_min) * (a.y_max - a.y_min);
  const double area_b = (b.x_max - b.x_min) * (b.y_max - b.y_min);
  return inter / (area_a + area_b - inter);
}

// Every detector box, plus each OCR box that overlaps no detector box by
// more than the threshold. The check is written as "no detector box
// exceeds", not via a running maximum.
inline std::vector<BBox> fuse_brute_force(const std::vector<BBox>& ocr_boxes,
                                          const std::vector<BBox>& detector_boxes, double threshold) {
  std::vector<BBox> out = detector_boxes;
  for (const BBox& o : ocr_boxes) {
    bool keep = true;
    for (const BBox& s : detector_boxes) {
      if (box_overlap_ratio(o, s) > threshold) keep = false;
    }
    if (keep) out.push_back(o);
  }
  return out;
}

}  // namespace docrestore::oracle
