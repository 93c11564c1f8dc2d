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


#include "docrestore/core/geometry.h"

namespace docrestore {

double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0 || h <= 0) return 0.0;
  return w * h;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

PixelRect to_pixels(const BBox& box, int width, int height) {
  PixelRect r;
  r.x0 = std::clamp(static_cast<int>(std::floor(box.x_min)), 0, width);
  r.y0 = std::clamp(static_cast<int>(std::floor(box.y_min)), 0, height);
  r.x1 = std::clamp(static_cast<int>(std::ceil(box.x_max)), 0, width);
  r.y1 = std::clamp(static_cast<int>(std::ceil(box.y_max)), 0, height);
  return r;
}

}  // namespace docrestore
