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

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "docrestore/core/glyph_atlas.h"
#include "docrestore/core/image.h"
#include "docrestore/core/types.h"

namespace docrestore::synthesis {

enum class DegradationKind { kCharMissing, kPaperDamage, kInkErosion };
enum class FillColor { kBlack, kWhite, kRandom };

std::string_view to_string(DegradationKind kind);
DegradationKind parse_degradation_kind(std::string_view text);

struct Range {
  double lo = 0;
  double hi = 0;
  bool operator==(const Range&) const = default;
};

struct CharMissingParams {
  Range char_fraction{0.2, 0.4};  // share of characters hit
  Range removal{0.3, 1.0};        // share of each hit box erased
  int ring_width = 3;             // background sample ring around a box
};

struct PaperDamageParams {
  Range coverage{0.01, 0.05};  // share of page pixels altered
  Range blob_count{1, 4};
  FillColor fill = FillColor::kRandom;
};

struct InkErosionParams {
  Range kernel{1, 1};         // odd max-filter size; 1 leaves strokes alone
  Range blur_radius{0, 0};    // box blur radius in pixels
  Range noise_density{0, 0};  // probability a pixel is inverted
};

struct DegradationRecipe {
  std::set<DegradationKind> kinds;
  CharMissingParams char_missing;
  PaperDamageParams paper_damage;
  InkErosionParams ink_erosion;
  std::uint64_t seed = 0;

  void validate() const;  // throws ContractError
};

nlohmann::json to_json(const DegradationRecipe& recipe);
DegradationRecipe recipe_from_json(const nlohmann::json& j);

// Luminance below this counts as glyph ink.
inline constexpr double kInkThreshold = 128.0;

// Grades by the share of glyph pixels destroyed: >= 0.8 severe, >= 0.4
// medium, otherwise light.
DamageGrade grade_for_removed_fraction(double removed);

struct AffectedBox {
  std::size_t index = 0;  // into the input box list
  BBox box;
  DamageGrade grade = DamageGrade::kLight;
  double removed_fraction = 0;
};

struct CharMissingResult {
  Image damaged;
  Image altered;  // 1 channel, 1 where pixels were overwritten
  std::vector<AffectedBox> affected;
};

// Erases part of randomly chosen character boxes with the median colour of
// a ring around each box.
CharMissingResult synth_char_missing(const Image& image, std::span<const BBox> char_boxes,
                                     const DegradationRecipe& recipe);

struct PaperDamageResult {
  Image damaged;
  Image mask;  // 1 channel, 1 where pixels were altered
};

// Covers a seeded union of ellipses with solid black or white. The altered
// share of the page lands inside the recipe's coverage range.
PaperDamageResult synth_paper_damage(const Image& image, const DegradationRecipe& recipe);

// Stroke thinning (max filter), box blur and pixel inversion noise.
Image synth_ink_erosion(const Image& image, const DegradationRecipe& recipe);

struct ToyPageSpec {
  int columns = 3;
  int chars_per_column = 4;
  int min_glyph = 36;
  int max_glyph = 44;
  int column_pitch = 64;
  int margin = 24;
  // Labels to draw from; empty means every atlas label.
  std::vector<std::string> alphabet;
};

struct ToyPage {
  Image image;
  AnnotationDoc annotation;  // gt labels, lines per column, reading order
};

// Renders a vertical, right-to-left page. The annotation's reading order is
// the generation order and serves as ground truth. Throws ContractError if
// the alphabet has labels the atlas lacks.
ToyPage generate_toy_page(const ToyPageSpec& spec, const GlyphAtlas& atlas, std::uint64_t seed);

struct DamagedPair {
  Image damaged;
  Image clean;
  AnnotationDoc annotation;  // damage boxes and per-char grades filled in
  Image altered;             // union of altered pixels (char + paper damage)
};

// Applies the recipe's degradations in a fixed order (character removal,
// paper damage, ink erosion). Characters with any altered pixel become
// damage boxes, graded by the share of their glyph pixels destroyed.
DamagedPair make_pair(const Image& clean, const AnnotationDoc& annotation,
                      const DegradationRecipe& recipe);

}  // namespace docrestore::synthesis
