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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "docrestore/core/types.h"

namespace docrestore::localization {

struct FusionParams {
  // Observations strictly below this OCR confidence count as ambiguous.
  double ocr_conf_threshold = 0.1;
  // Ambiguous boxes overlapping a detector box by more than this are dropped.
  double iou_threshold = 0.5;

  void validate() const;  // throws ContractError
};

// Boxes of observations whose confidence is below the threshold, in input
// order.
std::vector<BBox> collect_ambiguous(std::span<const CharObservation> chars,
                                    const FusionParams& params);
std::vector<std::size_t> ambiguous_indices(std::span<const CharObservation> chars,
                                           const FusionParams& params);

// B = B_s ∪ { b_o ∈ B_o : max_{b_s} IoU(b_o, b_s) <= iou_threshold }.
// Output is B_s in input order followed by the retained B_o in input order.
std::vector<BBox> fuse(std::span<const BBox> ambiguous, std::span<const BBox> detected,
                       const FusionParams& params);

enum class Layout { kVerticalRtl, kHorizontalLtr };

std::string_view to_string(Layout layout);
Layout parse_layout(std::string_view text);  // throws ContractError for unsupported layouts

// Orders page.chars (legible) and page.damage_boxes (damaged). Vertical-rtl
// groups boxes into columns (horizontal overlap >= 50% of the narrower box,
// transitively), orders columns right to left and boxes top to bottom.
// Horizontal-ltr is the transpose: rows top to bottom, boxes left to right.
std::vector<ReadingPosition> reading_order(const PageDocument& page,
                                           Layout layout = Layout::kVerticalRtl);

struct MaskToken {
  bool is_slot = false;
  std::string label;  // legible tokens
  int slot = 0;       // 1-based, slot tokens
  bool operator==(const MaskToken&) const = default;
};

struct SlotRef {
  int slot = 0;
  std::size_t damage_index = 0;  // into PageDocument::damage_boxes
  std::size_t position = 0;      // index into the reading order
  BBox box;
  bool operator==(const SlotRef&) const = default;
};

struct MaskedText {
  std::vector<MaskToken> tokens;
  std::vector<SlotRef> slots;  // slots[i].slot == i + 1

  std::size_t slot_count() const { return slots.size(); }
  // Legible labels with "[maskN]" markers in place of slots.
  std::string context() const;
  bool operator==(const MaskedText&) const = default;
};

std::string mask_marker(int slot);

// Legible positions contribute their top-1 label; damaged positions become
// slots numbered 1..n in order.
MaskedText build_masked_text(std::span<const ReadingPosition> positions,
                             std::span<const CharObservation> chars);

}  // namespace docrestore::localization
