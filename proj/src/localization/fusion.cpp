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


#include "docrestore/localization/fusion.h"

#include <algorithm>
#include <numeric>

#include "docrestore/core/errors.h"

namespace docrestore::localization {

void FusionParams::validate() const {
  if (!(ocr_conf_threshold >= 0 && ocr_conf_threshold <= 1)) {
    throw ContractError("ocr_conf_threshold must lie in [0,1]");
  }
  if (!(iou_threshold >= 0 && iou_threshold <= 1)) {
    throw ContractError("iou_threshold must lie in [0,1]");
  }
}

std::vector<std::size_t> ambiguous_indices(std::span<const CharObservation> chars,
                                           const FusionParams& params) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (chars[i].confidence() < params.ocr_conf_threshold) out.push_back(i);
  }
  return out;
}

std::vector<BBox> collect_ambiguous(std::span<const CharObservation> chars,
                                    const FusionParams& params) {
  std::vector<BBox> out;
  for (std::size_t i : ambiguous_indices(chars, params)) out.push_back(chars[i].box());
  return out;
}

std::vector<BBox> fuse(std::span<const BBox> ambiguous, std::span<const BBox> detected,
                       const FusionParams& params) {
  std::vector<BBox> out(detected.begin(), detected.end());
  for (const auto& bo : ambiguous) {
    double best = 0.0;
    for (const auto& bs : detected) best = std::max(best, iou(bo, bs));
    if (best <= params.iou_threshold) out.push_back(bo);
  }
  return out;
}

std::string_view to_string(Layout layout) {
  return layout == Layout::kVerticalRtl ? "vertical-rtl" : "horizontal-ltr";
}

Layout parse_layout(std::string_view text) {
  if (text == "vertical-rtl") return Layout::kVerticalRtl;
  if (text == "horizontal-ltr") return Layout::kHorizontalLtr;
  throw ContractError("unsupported layout '" + std::string(text) +
                      "' (expected vertical-rtl or horizontal-ltr)");
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Overlap of [a0,a1] and [b0,b1] relative to the shorter interval.
bool shares_band(double a0, double a1, double b0, double b1) {
  const double overlap = std::min(a1, b1) - std::max(a0, b0);
  const double narrower = std::min(a1 - a0, b1 - b0);
  return narrower > 0 && overlap >= 0.5 * narrower;
}

}  // namespace

std::vector<ReadingPosition> reading_order(const PageDocument& page, Layout layout) {
  std::vector<ReadingPosition> items;
  items.reserve(page.chars.size() + page.damage_boxes.size());
  for (std::size_t i = 0; i < page.chars.size(); ++i) {
    items.push_back({SlotKind::kLegible, i, page.chars[i].box()});
  }
  for (std::size_t i = 0; i < page.damage_boxes.size(); ++i) {
    items.push_back({SlotKind::kDamaged, i, page.damage_boxes[i].box});
  }
  const bool vertical = layout == Layout::kVerticalRtl;
  // Band axis: x for columns, y for rows. Flow axis: the other one.
  auto band_lo = [&](const BBox& b) { return vertical ? b.x_min : b.y_min; };
  auto band_hi = [&](const BBox& b) { return vertical ? b.x_max : b.y_max; };
  auto flow_lo = [&](const BBox& b) { return vertical ? b.y_min : b.x_min; };
  auto flow_hi = [&](const BBox& b) { return vertical ? b.y_max : b.x_max; };

  const std::size_t n = items.size();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (shares_band(band_lo(items[i].box), band_hi(items[i].box), band_lo(items[j].box),
                      band_hi(items[j].box))) {
        sets.unite(i, j);
      }
    }
  }

  struct Group {
    double lo = 0, hi = 0;
    std::vector<std::size_t> members;
  };
  std::vector<Group> groups;
  std::vector<std::ptrdiff_t> group_of(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<std::ptrdiff_t>(groups.size());
      groups.push_back({band_lo(items[i].box), band_hi(items[i].box), {}});
    }
    auto& g = groups[static_cast<std::size_t>(group_of[root])];
    g.lo = std::min(g.lo, band_lo(items[i].box));
    g.hi = std::max(g.hi, band_hi(items[i].box));
    g.members.push_back(i);
  }

  // Columns right to left (descending center); rows top to bottom.
  std::stable_sort(groups.begin(), groups.end(), [&](const Group& a, const Group& b) {
    const double ca = a.lo + a.hi, cb = b.lo + b.hi;
    if (ca != cb) return vertical ? ca > cb : ca < cb;
    return a.members.front() < b.members.front();
  });

  std::vector<ReadingPosition> out;
  out.reserve(n);
  for (auto& g : groups) {
    std::stable_sort(g.members.begin(), g.members.end(), [&](std::size_t a, std::size_t b) {
      const auto& ba = items[a].box;
      const auto& bb = items[b].box;
      if (flow_lo(ba) != flow_lo(bb)) return flow_lo(ba) < flow_lo(bb);
      if (flow_hi(ba) != flow_hi(bb)) return flow_hi(ba) < flow_hi(bb);
      // Within a column the right box reads first; within a row the left.
      if (band_lo(ba) != band_lo(bb)) return vertical ? band_lo(ba) > band_lo(bb) : band_lo(ba) < band_lo(bb);
      return a < b;
    });
    for (std::size_t m : g.members) out.push_back(items[m]);
  }
  return out;
}

std::string mask_marker(int slot) { return "[mask" + std::to_string(slot) + "]"; }

std::string MaskedText::context() const {
  std::string out;
  for (const auto& t : tokens) out += t.is_slot ? mask_marker(t.slot) : t.label;
  return out;
}

MaskedText build_masked_text(std::span<const ReadingPosition> positions,
                             std::span<const CharObservation> chars) {
  MaskedText text;
  int next_slot = 1;
  for (std::size_t p = 0; p < positions.size(); ++p) {
    const auto& pos = positions[p];
    if (pos.kind == SlotKind::kDamaged) {
      text.tokens.push_back({true, {}, next_slot});
      text.slots.push_back({next_slot, pos.index, p, pos.box});
      ++next_slot;
    } else {
      if (pos.index >= chars.size()) throw ContractError("reading position references missing char");
      text.tokens.push_back({false, chars[pos.index].top_label(), 0});
    }
  }
  return text;
}

}  // namespace docrestore::localization
