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


#include "docrestore/restoration/par.h"

#include <algorithm>
#include <array>

#include "docrestore/core/annotation_io.h"
#include "docrestore/core/errors.h"

namespace docrestore::restoration {

void ParParams::validate() const {
  if (!(stride > 0 && stride <= patch_size)) throw ContractError("PAR requires 0 < stride <= patch_size");
}

int ParParams::max_box_side() const { return std::min(stride, patch_size - stride); }

std::string_view to_string(Corner corner) {
  switch (corner) {
    case Corner::kTopLeft: return "TL";
    case Corner::kTopRight: return "TR";
    case Corner::kBottomLeft: return "BL";
    case Corner::kBottomRight: return "BR";
  }
  return "TL";
}

Corner parse_corner(std::string_view text) {
  if (text == "TL") return Corner::kTopLeft;
  if (text == "TR") return Corner::kTopRight;
  if (text == "BL") return Corner::kBottomLeft;
  if (text == "BR") return Corner::kBottomRight;
  throw ContractError("unknown corner '" + std::string(text) + "'");
}

BBox compute_extent(std::span<const BBox> boxes) {
  if (boxes.empty()) throw ContractError("compute_extent needs at least one box");
  BBox e = boxes.front();
  for (const auto& b : boxes.subspan(1)) {
    e.x_min = std::min(e.x_min, b.x_min);
    e.y_min = std::min(e.y_min, b.y_min);
    e.x_max = std::max(e.x_max, b.x_max);
    e.y_max = std::max(e.y_max, b.y_max);
  }
  return e;
}

namespace {

bool is_right(Corner c) { return c == Corner::kTopRight || c == Corner::kBottomRight; }
bool is_bottom(Corner c) { return c == Corner::kBottomLeft || c == Corner::kBottomRight; }

BBox to_bbox(const PixelRect& r) {
  return {static_cast<double>(r.x0), static_cast<double>(r.y0), static_cast<double>(r.x1),
          static_cast<double>(r.y1)};
}

// Window spans along one axis of length `extent`, starting at 0 (forward) or
// ending at `extent` (backward).
std::vector<std::pair<int, int>> axis_spans(int extent, const ParParams& p, bool backward) {
  std::vector<std::pair<int, int>> spans;
  if (!backward) {
    for (int start = 0;; start += p.stride) {
      spans.emplace_back(start, std::min(start + p.patch_size, extent));
      if (start + p.patch_size >= extent) break;
    }
  } else {
    for (int end = extent;; end -= p.stride) {
      spans.emplace_back(std::max(0, end - p.patch_size), end);
      if (end - p.patch_size <= 0) break;
    }
  }
  return spans;
}

}  // namespace

BBox corner_patch(const BBox& extent, Corner corner, int patch_size, int width, int height) {
  BBox p;
  const double size = patch_size;
  if (is_right(corner)) {
    p.x_max = extent.x_max;
    p.x_min = extent.x_max - size;
  } else {
    p.x_min = extent.x_min;
    p.x_max = extent.x_min + size;
  }
  if (is_bottom(corner)) {
    p.y_max = extent.y_max;
    p.y_min = extent.y_max - size;
  } else {
    p.y_min = extent.y_min;
    p.y_max = extent.y_min + size;
  }
  p.x_min = std::clamp(p.x_min, 0.0, static_cast<double>(width));
  p.x_max = std::clamp(p.x_max, 0.0, static_cast<double>(width));
  p.y_min = std::clamp(p.y_min, 0.0, static_cast<double>(height));
  p.y_max = std::clamp(p.y_max, 0.0, static_cast<double>(height));
  return p;
}

Corner select_start_corner(const BBox& extent, std::span<const BBox> unrestored, int patch_size,
                           int width, int height) {
  constexpr std::array<Corner, 4> order{Corner::kTopLeft, Corner::kTopRight, Corner::kBottomLeft,
                                        Corner::kBottomRight};
  Corner best = Corner::kTopLeft;
  std::size_t best_count = SIZE_MAX;
  for (Corner c : order) {
    const BBox patch = corner_patch(extent, c, patch_size, width, height);
    const auto count = static_cast<std::size_t>(std::count_if(
        unrestored.begin(), unrestored.end(), [&](const BBox& b) { return patch.contains(b); }));
    if (count < best_count) {
      best_count = count;
      best = c;
    }
  }
  return best;
}

std::vector<PixelRect> sliding_windows(Corner corner, int width, int height,
                                       const ParParams& params) {
  params.validate();
  const auto xs = axis_spans(width, params, is_right(corner));
  const auto ys = axis_spans(height, params, is_bottom(corner));
  std::vector<PixelRect> out;
  out.reserve(xs.size() * ys.size());
  for (const auto& [y0, y1] : ys) {
    for (const auto& [x0, x1] : xs) out.push_back({x0, y0, x1, y1});
  }
  return out;
}

PatchPlan plan_patches(int width, int height, std::span<const BBox> boxes,
                       const ParParams& params) {
  params.validate();
  const double limit = params.max_box_side();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    if (!is_well_formed(b) || !within_image(b, width, height)) {
      throw ContractError("damage box " + std::to_string(i) + " is degenerate or outside the image");
    }
    if (b.width() > limit || b.height() > limit) {
      throw ContractError("damage box " + std::to_string(i) +
                          " exceeds guaranteed containment; increase P/S");
    }
  }

  PatchPlan plan;
  plan.assignment.assign(boxes.size(), SIZE_MAX);
  std::vector<bool> restored(boxes.size(), false);
  std::size_t remaining = boxes.size();

  for (std::size_t iteration = 0; remaining > 0; ++iteration) {
    std::vector<BBox> unrestored;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (!restored[i]) unrestored.push_back(boxes[i]);
    }
    const BBox extent = compute_extent(unrestored);
    const Corner corner = select_start_corner(extent, unrestored, params.patch_size, width, height);
    plan.iteration_corners.push_back(corner);

    const std::size_t before = remaining;
    for (const auto& window : sliding_windows(corner, width, height, params)) {
      if (remaining == 0) break;
      const BBox wb = to_bbox(window);
      if (!wb.intersects(extent)) continue;
      PatchStep step;
      step.window = window;
      step.iteration = iteration;
      for (std::size_t i = 0; i < boxes.size(); ++i) {
        if (restored[i]) continue;
        if (wb.contains(boxes[i])) {
          step.contained.push_back(i);
        } else if (wb.intersects(boxes[i])) {
          step.deferred.push_back(i);
        }
      }
      if (step.contained.empty()) continue;
      for (std::size_t i : step.contained) {
        restored[i] = true;
        plan.assignment[i] = plan.steps.size();
        --remaining;
      }
      plan.steps.push_back(std::move(step));
    }
    if (remaining == before) {
      // Unreachable while the size precondition holds.
      throw ContractError("patch schedule made no progress");
    }
  }
  return plan;
}

ContentMask render_content_mask(const PixelRect& window, std::span<const RestorationTarget> assigned,
                                std::span<const BBox> deferred, const GlyphAtlas& atlas) {
  const int w = window.width(), h = window.height();
  ContentMask out{Image(w, h, 1, 255), Image(w, h, 1, 0), {}, {}};
  auto local_rect = [&](const BBox& box) {
    const BBox local{box.x_min - window.x0, box.y_min - window.y0, box.x_max - window.x0,
                     box.y_max - window.y0};
    return std::pair{local, to_pixels(local, w, h)};
  };
  for (const auto& target : assigned) {
    const auto [local, r] = local_rect(target.box);
    if (r.empty()) continue;
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) out.mask.at(x, y) = 1;
    }
    const Glyph* glyph = target.label.empty() ? nullptr : atlas.find(target.label);
    if (glyph) {
      const auto ink = rasterize_glyph(*glyph, r.width(), r.height());
      for (int y = 0; y < r.height(); ++y) {
        for (int x = 0; x < r.width(); ++x) {
          if (ink[static_cast<std::size_t>(y) * r.width() + x]) out.content.at(r.x0 + x, r.y0 + y) = 0;
        }
      }
    } else {
      out.warnings.push_back("no glyph for label '" + target.label + "'; drew placeholder outline");
      for (int x = r.x0; x < r.x1; ++x) {
        out.content.at(x, r.y0) = 0;
        out.content.at(x, r.y1 - 1) = 0;
      }
      for (int y = r.y0; y < r.y1; ++y) {
        out.content.at(r.x0, y) = 0;
        out.content.at(r.x1 - 1, y) = 0;
      }
    }
  }
  for (const auto& box : deferred) {
    const auto [local, r] = local_rect(box);
    out.ignore_regions.push_back(local);
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) out.mask.at(x, y) = 0;
    }
  }
  return out;
}

RestoreResult restore_page(const Image& image, std::span<const RestorationTarget> targets,
                           InpaintBackend& backend, const GlyphAtlas& atlas,
                           const ParParams& params) {
  std::vector<BBox> boxes;
  boxes.reserve(targets.size());
  for (const auto& t : targets) boxes.push_back(t.box);

  RestoreResult result;
  result.plan = plan_patches(image.width(), image.height(), boxes, params);
  result.restored = image;
  result.content = Image(image.width(), image.height(), 1, 255);

  for (std::size_t s = 0; s < result.plan.steps.size(); ++s) {
    const auto& step = result.plan.steps[s];
    std::vector<RestorationTarget> assigned;
    for (std::size_t i : step.contained) assigned.push_back(targets[i]);
    std::vector<BBox> deferred;
    for (std::size_t i : step.deferred) deferred.push_back(boxes[i]);

    auto cm = render_content_mask(step.window, assigned, deferred, atlas);
    for (auto& w : cm.warnings) result.warnings.push_back("step " + std::to_string(s) + ": " + w);

    InpaintRequest request{result.restored.crop(step.window), cm.content, cm.mask,
                           cm.ignore_regions};
    Image patch;
    try {
      patch = backend.inpaint(request);
    } catch (const std::exception& e) {
      result.failure = StepFailure{s, e.what()};
      return result;
    }
    if (!patch.same_shape(request.damaged)) {
      result.failure = StepFailure{s, "inpaint backend returned a patch of the wrong shape"};
      return result;
    }
    result.restored.paste_masked(patch, cm.mask, step.window.x0, step.window.y0);
    result.content.paste_masked(cm.content, cm.mask, step.window.x0, step.window.y0);
    ++result.steps_executed;
  }
  return result;
}

nlohmann::json plan_to_json(const PatchPlan& plan, std::span<const BBox> boxes) {
  using nlohmann::json;
  json steps = json::array();
  for (const auto& s : plan.steps) {
    steps.push_back({{"window", {s.window.x0, s.window.y0, s.window.x1, s.window.y1}},
                     {"contained", s.contained},
                     {"deferred", s.deferred},
                     {"iteration", s.iteration}});
  }
  json corners = json::array();
  for (Corner c : plan.iteration_corners) corners.push_back(to_string(c));
  json box_list = json::array();
  for (const auto& b : boxes) box_list.push_back(to_json(b));
  return {{"start_corner", to_string(plan.start_corner())},
          {"iteration_corners", std::move(corners)},
          {"steps", std::move(steps)},
          {"assignment", plan.assignment},
          {"boxes", std::move(box_list)}};
}

PatchPlan plan_from_json(const nlohmann::json& j) {
  PatchPlan plan;
  try {
    for (const auto& c : j.at("iteration_corners")) plan.iteration_corners.push_back(parse_corner(c.get<std::string>()));
    for (const auto& s : j.at("steps")) {
      PatchStep step;
      const auto& w = s.at("window");
      step.window = {w.at(0).get<int>(), w.at(1).get<int>(), w.at(2).get<int>(), w.at(3).get<int>()};
      step.contained = s.at("contained").get<std::vector<std::size_t>>();
      step.deferred = s.at("deferred").get<std::vector<std::size_t>>();
      step.iteration = s.at("iteration").get<std::size_t>();
      plan.steps.push_back(std::move(step));
    }
    plan.assignment = j.at("assignment").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("plan", e.what());
  } catch (const ContractError& e) {
    throw ParseError("plan.iteration_corners", e.what());
  }
  return plan;
}

}  // namespace docrestore::restoration
