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

#include <algorithm>
#include <cmath>
#include <optional>

namespace docrestore {

// Axis-aligned box in image pixel coordinates, origin top-left.
struct BBox {
  double x_min = 0;
  double y_min = 0;
  double x_max = 0;
  double y_max = 0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }

  bool contains(const BBox& other) const {
    return x_min <= other.x_min && y_min <= other.y_min && other.x_max <= x_max &&
           other.y_max <= y_max;
  }
  // Positive-area overlap.
  bool intersects(const BBox& other) const {
    return std::min(x_max, other.x_max) > std::max(x_min, other.x_min) &&
           std::min(y_max, other.y_max) > std::max(y_min, other.y_min);
  }

  bool operator==(const BBox&) const = default;
};

inline bool is_well_formed(const BBox& b) {
  return std::isfinite(b.x_min) && std::isfinite(b.y_min) && std::isfinite(b.x_max) &&
         std::isfinite(b.y_max) && b.x_min >= 0 && b.y_min >= 0 && b.x_min < b.x_max &&
         b.y_min < b.y_max;
}

inline bool within_image(const BBox& b, int width, int height) {
  return b.x_min >= 0 && b.y_min >= 0 && b.x_max <= width && b.y_max <= height;
}

double intersection_area(const BBox& a, const BBox& b);

// Intersection over union; 0 for disjoint boxes or zero union.
double iou(const BBox& a, const BBox& b);

// Integer pixel rectangle, half-open: [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  bool operator==(const PixelRect&) const = default;
};

// Rasterizes a real box to every pixel it touches, clipped to [0,w)x[0,h).
PixelRect to_pixels(const BBox& box, int width, int height);

}  // namespace docrestore
