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

#include <cmath>

#include "docrestore/core/annotation_io.h"
#include "docrestore/core/errors.h"
#include "docrestore/core/glyph_atlas.h"
#include "docrestore/synthesis/degradation.h"

namespace docrestore::synthesis {
namespace {

const GlyphAtlas& atlas() {
  static const GlyphAtlas a = GlyphAtlas::procedural(default_alphabet(), 16, 7);
  return a;
}

ToyPage toy(int columns, int per_column, std::uint64_t seed = 1) {
  ToyPageSpec spec;
  spec.columns = columns;
  spec.chars_per_column = per_column;
  return generate_toy_page(spec, atlas(), seed);
}

std::vector<BBox> char_boxes(const AnnotationDoc& doc) {
  std::vector<BBox> out;
  for (const auto& c : doc.page.chars) out.push_back(c.box());
  return out;
}

std::size_t mask_count(const Image& m) {
  std::size_t n = 0;
  for (auto v : m.data()) n += v != 0;
  return n;
}

TEST(ToyPage, SingleChar) {
  const auto t = toy(1, 1);
  EXPECT_EQ(t.annotation.page.chars.size(), 1u);
  EXPECT_EQ(t.annotation.page.reading_order.size(), 1u);
}

TEST(ToyPage, ThreeByFourRightColumnFirst) {
  const auto t = toy(3, 4);
  const auto& order = t.annotation.page.reading_order;
  ASSERT_EQ(order.size(), 12u);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_GT(order[i].box.y_min, order[i - 1].box.y_min);
  EXPECT_GT(order[0].box.x_min, order[4].box.x_max);
  EXPECT_GT(order[4].box.x_min, order[8].box.x_max);
  EXPECT_TRUE(validate_page(t.annotation.page).empty());
  for (const auto& truth : t.annotation.char_truth) EXPECT_TRUE(truth.gt_label.has_value());
}

TEST(ToyPage, SeedFixesBytes) {
  EXPECT_EQ(toy(3, 4, 9).image, toy(3, 4, 9).image);
  EXPECT_NE(toy(3, 4, 9).image, toy(3, 4, 10).image);
}

TEST(ToyPage, MissingGlyphRejected) {
  ToyPageSpec spec;
  spec.alphabet = {"not-in-atlas"};
  EXPECT_THROW(generate_toy_page(spec, atlas(), 1), ContractError);
}

TEST(CharMissing, ZeroFractionUnchanged) {
  const auto t = toy(2, 3);
  DegradationRecipe r;
  r.char_missing.char_fraction = {0, 0};
  const auto out = synth_char_missing(t.image, char_boxes(t.annotation), r);
  EXPECT_EQ(out.damaged, t.image);
  EXPECT_TRUE(out.affected.empty());
}

TEST(CharMissing, FullRemovalLeavesNoInkAndIsSevere) {
  const auto t = toy(2, 3);
  DegradationRecipe r;
  r.char_missing.char_fraction = {1, 1};
  r.char_missing.removal = {1, 1};
  const auto boxes = char_boxes(t.annotation);
  const auto out = synth_char_missing(t.image, boxes, r);
  ASSERT_EQ(out.affected.size(), boxes.size());
  for (const auto& a : out.affected) {
    EXPECT_EQ(a.grade, DamageGrade::kSevere);
    const auto px = to_pixels(a.box, t.image.width(), t.image.height());
    for (int y = px.y0; y < px.y1; ++y) {
      for (int x = px.x0; x < px.x1; ++x) ASSERT_GE(out.damaged.luminance(x, y), kInkThreshold);
    }
  }
  EXPECT_EQ(synth_char_missing(t.image, boxes, r).damaged, out.damaged);
}

TEST(CharMissing, GradeMonotoneInRemoval) {
  EXPECT_EQ(grade_for_removed_fraction(0.39), DamageGrade::kLight);
  EXPECT_EQ(grade_for_removed_fraction(0.4), DamageGrade::kMedium);
  EXPECT_EQ(grade_for_removed_fraction(0.8), DamageGrade::kSevere);
  for (int i = 1; i <= 100; ++i) {
    EXPECT_GE(static_cast<int>(grade_for_removed_fraction(i / 100.0)),
              static_cast<int>(grade_for_removed_fraction((i - 1) / 100.0)));
  }
}

TEST(PaperDamage, CoverageBounds) {
  const Image img(120, 80, 3, 190);
  DegradationRecipe r;
  r.paper_damage.coverage = {0, 0};
  const auto none = synth_paper_damage(img, r);
  EXPECT_EQ(none.damaged, img);
  EXPECT_EQ(mask_count(none.mask), 0u);

  r.paper_damage.coverage = {1, 1};
  r.paper_damage.fill = FillColor::kBlack;
  EXPECT_EQ(synth_paper_damage(img, r).damaged, Image(120, 80, 3, 0));

  r.paper_damage.coverage = {0.1, 0.2};
  r.paper_damage.fill = FillColor::kWhite;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    r.seed = seed;
    const double f = static_cast<double>(mask_count(synth_paper_damage(img, r).mask)) / (120.0 * 80.0);
    EXPECT_GE(f, 0.1);
    EXPECT_LE(f, 0.2);
  }
}

TEST(InkErosion, ZeroStrengthIsIdentity) {
  const auto t = toy(2, 2);
  EXPECT_EQ(synth_ink_erosion(t.image, DegradationRecipe{}), t.image);
}

TEST(InkErosion, SpeckleCountWithinThreeSigma) {
  const Image img(200, 150, 1, 200);
  DegradationRecipe r;
  const double d = 0.01;
  r.ink_erosion.noise_density = {d, d};
  r.seed = 4;
  const auto out = synth_ink_erosion(img, r);
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < img.data().size(); ++i) flipped += out.data()[i] != img.data()[i];
  const double n = 200.0 * 150.0;
  EXPECT_LE(std::abs(static_cast<double>(flipped) - d * n), 3 * std::sqrt(n * d * (1 - d)));
  EXPECT_EQ(synth_ink_erosion(img, r), out);
}

TEST(InkErosion, ThinningLightensStrokes) {
  const auto t = toy(2, 2);
  DegradationRecipe r;
  r.ink_erosion.kernel = {3, 3};
  const auto out = synth_ink_erosion(t.image, r);
  std::size_t dark_before = 0, dark_after = 0;
  for (int y = 0; y < t.image.height(); ++y) {
    for (int x = 0; x < t.image.width(); ++x) {
      dark_before += t.image.luminance(x, y) < kInkThreshold;
      dark_after += out.luminance(x, y) < kInkThreshold;
    }
  }
  EXPECT_LT(dark_after, dark_before);
}

TEST(MakePair, EmptyRecipeIsNoop) {
  const auto t = toy(2, 3);
  const auto p = make_pair(t.image, t.annotation, DegradationRecipe{});
  EXPECT_EQ(p.damaged, t.image);
  EXPECT_TRUE(p.annotation.page.damage_boxes.empty());
}

TEST(MakePair, CharMissingConfinedToBoxes) {
  const auto t = toy(3, 4);
  DegradationRecipe r;
  r.kinds = {DegradationKind::kCharMissing};
  r.char_missing.char_fraction = {0.5, 0.5};
  r.seed = 3;
  const auto p = make_pair(t.image, t.annotation, r);
  EXPECT_EQ(p.clean, t.image);
  EXPECT_FALSE(p.annotation.page.damage_boxes.empty());
  const auto boxes = char_boxes(t.annotation);
  for (int y = 0; y < t.image.height(); ++y) {
    for (int x = 0; x < t.image.width(); ++x) {
      bool inside = false;
      for (const auto& b : boxes) inside = inside || (x >= b.x_min && x < b.x_max && y >= b.y_min && y < b.y_max);
      if (!inside) {
        for (int c = 0; c < 3; ++c) ASSERT_EQ(p.damaged.at(x, y, c), t.image.at(x, y, c));
      }
    }
  }
  for (const auto& d : p.annotation.page.damage_boxes) {
    EXPECT_TRUE(d.grade.has_value());
    EXPECT_TRUE(d.gt_label.has_value());
  }
}

TEST(MakePair, AllKindsDeterministic) {
  const auto t = toy(3, 4);
  DegradationRecipe r;
  r.kinds = {DegradationKind::kCharMissing, DegradationKind::kPaperDamage, DegradationKind::kInkErosion};
  r.ink_erosion.noise_density = {0.001, 0.002};
  r.seed = 77;
  const auto a = make_pair(t.image, t.annotation, r);
  const auto b = make_pair(t.image, t.annotation, r);
  EXPECT_EQ(a.damaged, b.damaged);
  EXPECT_EQ(a.annotation, b.annotation);
  EXPECT_EQ(a.damaged.width(), t.image.width());
}

TEST(Recipe, JsonRoundTripAndValidation) {
  DegradationRecipe r;
  r.kinds = {DegradationKind::kPaperDamage};
  r.paper_damage.coverage = {0.02, 0.03};
  r.seed = 12;
  const auto back = recipe_from_json(to_json(r));
  EXPECT_EQ(back.kinds, r.kinds);
  EXPECT_EQ(back.paper_damage.coverage, r.paper_damage.coverage);
  EXPECT_EQ(back.seed, 12u);
  r.paper_damage.coverage = {0.5, 0.1};
  EXPECT_THROW(r.validate(), ContractError);
}

}  // namespace
}  // namespace docrestore::synthesis
