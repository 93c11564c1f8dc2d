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

#include <algorithm>

#include "docrestore/core/errors.h"
#include "docrestore/core/glyph_atlas.h"
#include "docrestore/core/rng.h"
#include "docrestore/localization/fusion.h"
#include "docrestore/synthesis/degradation.h"
#include "oracles/fusion_oracle.h"

namespace docrestore::localization {
namespace {

CharObservation obs(BBox box, double conf, const std::string& label = "a") {
  return CharObservation(box, {{label, conf}});
}

TEST(CollectAmbiguous, AllConfidentGivesNothing) {
  std::vector<CharObservation> chars{obs({0, 0, 1, 1}, 0.5), obs({2, 0, 3, 1}, 0.1)};
  EXPECT_TRUE(collect_ambiguous(chars, {}).empty());
}

TEST(CollectAmbiguous, LowConfidenceSelected) {
  std::vector<CharObservation> chars{obs({0, 0, 1, 1}, 0.05)};
  EXPECT_EQ(collect_ambiguous(chars, {}), (std::vector<BBox>{BBox{0, 0, 1, 1}}));
}

TEST(CollectAmbiguous, ThresholdIsStrict) {
  std::vector<CharObservation> chars{obs({0, 0, 1, 1}, 0.09), obs({2, 0, 3, 1}, 0.10),
                                     obs({4, 0, 5, 1}, 0.5)};
  EXPECT_EQ(collect_ambiguous(chars, {}), (std::vector<BBox>{BBox{0, 0, 1, 1}}));
  EXPECT_EQ(ambiguous_indices(chars, {}), std::vector<std::size_t>{0});
}

TEST(CollectAmbiguous, EmptyCandidatesCountAsZeroConfidence) {
  std::vector<CharObservation> chars{CharObservation(BBox{0, 0, 1, 1}, {}, ObservationSource::kDamageDetector)};
  EXPECT_EQ(collect_ambiguous(chars, {}).size(), 1u);
}

TEST(Fuse, EmptyOcrSideKeepsDetector) {
  const std::vector<BBox> s{{0, 0, 10, 10}};
  EXPECT_EQ(fuse({}, s, {}), s);
}

TEST(Fuse, OverlappingOcrBoxDropped) {
  const std::vector<BBox> s{{0, 0, 10, 10}};
  const std::vector<BBox> o{{1, 1, 9, 9}, {100, 100, 110, 110}};
  const std::vector<BBox> want{{0, 0, 10, 10}, {100, 100, 110, 110}};
  EXPECT_EQ(fuse(o, s, {}), want);
}

TEST(Fuse, ExactlyHalfOverlapRetained) {
  const std::vector<BBox> s{{0, 0, 10, 20}};
  const std::vector<BBox> o{{0, 0, 10, 10}};
  ASSERT_DOUBLE_EQ(iou(o[0], s[0]), 0.5);
  EXPECT_EQ(fuse(o, s, {}).size(), 2u);
}

TEST(Fuse, BadParamsRejected) {
  FusionParams p;
  p.iou_threshold = 1.5;
  EXPECT_THROW(p.validate(), ContractError);
}

TEST(Fuse, SupersetOfDetectorAndMatchesOracle) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    auto box = [&] {
      const double x = static_cast<double>(rng.below(60)), y = static_cast<double>(rng.below(60));
      return BBox{x, y, x + 1 + static_cast<double>(rng.below(20)), y + 1 + static_cast<double>(rng.below(20))};
    };
    std::vector<BBox> o(rng.below(6)), s(rng.below(6));
    for (auto& b : o) b = box();
    for (auto& b : s) b = box();
    const auto got = fuse(o, s, {});
    ASSERT_TRUE(std::equal(s.begin(), s.end(), got.begin()));
    ASSERT_EQ(got, oracle::fuse_brute_force(o, s, 0.5));
  }
}

PageDocument page_with(const std::vector<BBox>& char_boxes, const std::vector<BBox>& damage) {
  PageDocument page;
  page.image = {"p.png", 1000, 1000};
  for (const auto& b : char_boxes) page.chars.push_back(obs(b, 0.9));
  for (const auto& b : damage) page.damage_boxes.push_back({b, std::nullopt, std::nullopt});
  return page;
}

TEST(ReadingOrder, SingleBox) {
  const auto order = reading_order(page_with({{5, 5, 15, 15}}, {}));
  ASSERT_EQ(order.size(), 1u);
  EXPECT_EQ(order[0].index, 0u);
}

TEST(ReadingOrder, RightColumnFirst) {
  const auto order = reading_order(page_with({{0, 0, 10, 10}, {20, 0, 30, 10}}, {}));
  ASSERT_EQ(order.size(), 2u);
  EXPECT_EQ(order[0].index, 1u);
  EXPECT_EQ(order[1].index, 0u);
}

TEST(ReadingOrder, TopToBottomWithinColumnAndMixedKinds) {
  // Column on the right holds a damage box between two chars; slight
  // horizontal jitter stays in one column.
  const auto order = reading_order(page_with({{100, 0, 120, 20}, {102, 60, 121, 80}, {0, 0, 20, 20}},
                                             {{101, 30, 119, 50}}));
  ASSERT_EQ(order.size(), 4u);
  EXPECT_EQ(order[0], (ReadingPosition{SlotKind::kLegible, 0, {100, 0, 120, 20}}));
  EXPECT_EQ(order[1].kind, SlotKind::kDamaged);
  EXPECT_EQ(order[2].index, 1u);
  EXPECT_EQ(order[3].index, 2u);
}

TEST(ReadingOrder, HorizontalLayoutRowsTopDownLeftToRight) {
  const auto order = reading_order(page_with({{50, 0, 60, 10}, {0, 0, 10, 10}, {0, 40, 10, 50}}, {}),
                                   Layout::kHorizontalLtr);
  ASSERT_EQ(order.size(), 3u);
  EXPECT_EQ(order[0].index, 1u);
  EXPECT_EQ(order[1].index, 0u);
  EXPECT_EQ(order[2].index, 2u);
}

TEST(ReadingOrder, UnsupportedLayoutRejected) {
  EXPECT_THROW(parse_layout("diagonal"), ContractError);
  EXPECT_EQ(parse_layout("vertical-rtl"), Layout::kVerticalRtl);
}

TEST(ReadingOrder, PermutationOnRandomPages) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    std::vector<BBox> c(rng.below(10)), d(rng.below(5));
    for (auto& b : c) {
      const double x = rng.uniform(0, 900), y = rng.uniform(0, 900);
      b = {x, y, x + rng.uniform(1, 50), y + rng.uniform(1, 50)};
    }
    for (auto& b : d) {
      const double x = rng.uniform(0, 900), y = rng.uniform(0, 900);
      b = {x, y, x + rng.uniform(1, 50), y + rng.uniform(1, 50)};
    }
    const auto page = page_with(c, d);
    const auto order = reading_order(page);
    ASSERT_EQ(order.size(), c.size() + d.size());
    std::vector<int> seen_c(c.size()), seen_d(d.size());
    for (const auto& p : order) (p.kind == SlotKind::kLegible ? seen_c[p.index] : seen_d[p.index])++;
    for (int v : seen_c) ASSERT_EQ(v, 1);
    for (int v : seen_d) ASSERT_EQ(v, 1);
    ASSERT_EQ(reading_order(page), order);
  }
}

TEST(ReadingOrder, ToyPageMatchesGenerator) {
  const auto alphabet = default_alphabet();
  const auto atlas = GlyphAtlas::procedural(alphabet, 16, 3);
  synthesis::ToyPageSpec spec;
  spec.columns = 3;
  spec.chars_per_column = 4;
  spec.alphabet = alphabet;
  const auto toy = synthesis::generate_toy_page(spec, atlas, 11);
  ASSERT_EQ(toy.annotation.page.chars.size(), 12u);
  EXPECT_EQ(reading_order(toy.annotation.page), toy.annotation.page.reading_order);
  // Right column, top-down, comes first.
  const auto& first = toy.annotation.page.reading_order.front().box;
  for (const auto& c : toy.annotation.page.chars) EXPECT_LT(c.box().x_min, first.x_max);
}

TEST(MaskedText, AllLegibleIsTranscript) {
  std::vector<CharObservation> chars{obs({0, 0, 1, 1}, 0.9, "a"), obs({0, 2, 1, 3}, 0.9, "b")};
  const std::vector<ReadingPosition> pos{{SlotKind::kLegible, 0, {}}, {SlotKind::kLegible, 1, {}}};
  const auto m = build_masked_text(pos, chars);
  EXPECT_EQ(m.context(), "ab");
  EXPECT_EQ(m.slot_count(), 0u);
}

TEST(MaskedText, SlotsNumberedInOrder) {
  std::vector<CharObservation> chars{obs({0, 0, 1, 1}, 0.9, "a"), obs({0, 2, 1, 3}, 0.9, "c")};
  const std::vector<ReadingPosition> pos{{SlotKind::kLegible, 0, {}},
                                         {SlotKind::kDamaged, 4, {0, 1, 1, 2}},
                                         {SlotKind::kLegible, 1, {}},
                                         {SlotKind::kDamaged, 2, {0, 4, 1, 5}}};
  const auto m = build_masked_text(pos, chars);
  EXPECT_EQ(m.context(), "a[mask1]c[mask2]");
  ASSERT_EQ(m.slot_count(), 2u);
  EXPECT_EQ(m.slots[0].damage_index, 4u);
  EXPECT_EQ(m.slots[1].slot, 2);
  EXPECT_EQ(m.slots[1].position, 3u);
}

}  // namespace
}  // namespace docrestore::localization
