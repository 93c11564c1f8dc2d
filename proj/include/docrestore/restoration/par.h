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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "docrestore/core/backends.h"
#include "docrestore/core/glyph_atlas.h"
#include "docrestore/core/image.h"

namespace docrestore::restoration {

struct ParParams {
  int patch_size = 448;
  int stride = 224;

  void validate() const;  // 0 < stride <= patch_size
  // Largest box side that some window of the stride grid is guaranteed to
  // contain: min(stride, patch_size - stride).
  int max_box_side() const;
};

enum class Corner { kTopLeft, kTopRight, kBottomLeft, kBottomRight };

std::string_view to_string(Corner corner);
Corner parse_corner(std::string_view text);

struct PatchStep {
  PixelRect window;                         // clipped to the image
  std::vector<std::size_t> contained;       // boxes restored by this step
  std::vector<std::size_t> deferred;        // unrestored boxes cut by the window
  std::size_t iteration = 0;                // outer-loop pass that produced it
  bool operator==(const PatchStep&) const = default;
};

struct PatchPlan {
  std::vector<PatchStep> steps;
  std::vector<Corner> iteration_corners;    // chosen start corner per pass
  std::vector<std::size_t> assignment;      // box id -> step index

  Corner start_corner() const {
    return iteration_corners.empty() ? Corner::kTopLeft : iteration_corners.front();
  }
  bool operator==(const PatchPlan&) const = default;
};

// Minimal box containing all inputs. Throws ContractError on empty input.
BBox compute_extent(std::span<const BBox> boxes);

// P x P patch anchored at `corner` of `extent`, extending inward, clipped
// to the image.
BBox corner_patch(const BBox& extent, Corner corner, int patch_size, int width, int height);

// Corner whose patch fully contains the fewest unrestored boxes; ties go to
// TL, TR, BL, BR in that order.
Corner select_start_corner(const BBox& extent, std::span<const BBox> unrestored, int patch_size,
                           int width, int height);

// Stride grid anchored at the image corner matching `corner`, clipped to the
// image, in row-major order moving away from that corner.
std::vector<PixelRect> sliding_windows(Corner corner, int width, int height,
                                       const ParParams& params);

// Dry run of the patch-autoregressive schedule: per pass, take the extent of
// unrestored boxes, pick the start corner, sweep the windows that meet the
// extent and assign each unrestored box to the first window that fully
// contains it. Windows that contain nothing are skipped. Throws
// ContractError for boxes outside the image or larger than max_box_side().
PatchPlan plan_patches(int width, int height, std::span<const BBox> boxes,
                       const ParParams& params);

struct RestorationTarget {
  BBox box;
  std::string label;
};

struct ContentMask {
  Image content;                    // 255 blank, 0 glyph ink
  Image mask;                       // 1 inside assigned boxes
  std::vector<BBox> ignore_regions; // window-local deferred boxes
  std::vector<std::string> warnings;
};

// Renders x_c and x_m for one window. Boxes are in page coordinates and must
// lie inside the window. Deferred boxes are cleared from the mask and
// reported as ignore regions. A label without a glyph is drawn as a box
// outline and reported in warnings.
ContentMask render_content_mask(const PixelRect& window, std::span<const RestorationTarget> assigned,
                                std::span<const BBox> deferred, const GlyphAtlas& atlas);

struct StepFailure {
  std::size_t step = 0;
  std::string message;
};

struct RestoreResult {
  Image restored;
  PatchPlan plan;
  Image content;  // page-sized composite of every step's content image
  std::size_t steps_executed = 0;
  std::vector<std::string> warnings;
  std::optional<StepFailure> failure;  // set when a step aborted the run
};

// Executes the plan against the inpainting backend. Each step crops the
// current working image, so later steps see earlier restorations; results
// are pasted back only where the mask is set. On backend failure the run
// stops and the partially restored image is returned with `failure` set.
RestoreResult restore_page(const Image& image, std::span<const RestorationTarget> targets,
                           InpaintBackend& backend, const GlyphAtlas& atlas,
                           const ParParams& params);

nlohmann::json plan_to_json(const PatchPlan& plan, std::span<const BBox> boxes);
PatchPlan plan_from_json(const nlohmann::json& j);

}  // namespace docrestore::restoration
