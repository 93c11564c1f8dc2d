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


#include <gtest/gtest.h>

#include "docrestore/core/geometry.h"
#include "docrestore/core/rng.h"

namespace docrestore {
namespace {

TEST(Iou, IdenticalBoxesGiveOne) {
  const BBox a{3, 4, 17, 29};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
}

TEST(Iou, DisjointBoxesGiveZero) {
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {20, 20, 30, 30}), 0.0);
  // Touching edges share no area.
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {10, 0, 20, 10}), 0.0);
}

TEST(Iou, HalfOverlapWorkedExample) {
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {0, 0, 10, 20}), 0.5);
}

TEST(Iou, SymmetricAndBoundedOnRandomBoxes) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto box = [&] {
      const double x = rng.uniform(0, 50), y = rng.uniform(0, 50);
      return BBox{x, y, x + rng.uniform(0.1, 30), y + rng.uniform(0.1, 30)};
    };
    const BBox a = box(), b = box();
    const double ab = iou(a, b);
    EXPECT_EQ(ab, iou(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(BBoxChecks, WellFormedness) {
  EXPECT_TRUE(is_well_formed({0, 0, 1, 1}));
  EXPECT_FALSE(is_well_formed({5, 0, 5, 1}));
  EXPECT_FALSE(is_well_formed({-1, 0, 5, 1}));
  EXPECT_TRUE(within_image({0, 0, 10, 10}, 10, 10));
  EXPECT_FALSE(within_image({0, 0, 10.5, 10}, 10, 10));
}

TEST(ToPixels, CoversEveryTouchedPixelAndClips) {
  const PixelRect r = to_pixels({1.5, 2.0, 4.2, 5.0}, 100, 100);
  EXPECT_EQ(r, (PixelRect{1, 2, 5, 5}));
  const PixelRect clipped = to_pixels({90.5, 95, 120, 130}, 100, 100);
  EXPECT_EQ(clipped, (PixelRect{90, 95, 100, 100}));
  EXPECT_TRUE(to_pixels({200, 200, 210, 210}, 100, 100).empty());
}

}  // namespace
}  // namespace docrestore
