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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "docrestore/core/backends.h"
#include "docrestore/pipeline/config.h"
#include "docrestore/pipeline/job.h"

namespace docrestore::pipeline {

// Stage 1: every char observation, the detector boxes, the fused damage
// boxes and the derived page (legible chars + damage boxes in reading order).
struct Stage1Artifact {
  std::vector<CharObservation> observations;
  std::vector<DamageBox> detected;   // B_s
  std::vector<BBox> ambiguous;       // B_o
  PageDocument page;                 // chars = legible only
  std::vector<std::size_t> legible;  // page.chars[i] == observations[legible[i]]
  localization::MaskedText masked;
};

// Recomputes the legible set, reading order and masked text after the
// page's damage boxes changed.
void derive_stage1(Stage1Artifact& artifact, const PipelineConfig& config);

Stage1Artifact run_stage1(const Image& page, const AnnotationDoc& input, OcrBackend& ocr,
                          const PipelineConfig& config);

nlohmann::json to_json(const Stage1Artifact& artifact);
Stage1Artifact stage1_from_json(const nlohmann::json& j);

enum class PredictionSource { kVlcp, kHuman };
std::string_view to_string(PredictionSource source);

struct SlotRecord {
  prediction::SlotPrediction prediction;
  PredictionSource source = PredictionSource::kVlcp;
  std::optional<Selection> selection;
};

struct Stage2Artifact {
  std::vector<SlotRecord> slots;
  int lm_calls = 0;

  const SlotRecord* find(int slot) const;
  SlotRecord* find(int slot);
};

Stage2Artifact run_stage2(const Image& page, const Stage1Artifact& stage1, OcrBackend& ocr, LmBackend& lm,
                          const PipelineConfig& config);

nlohmann::json to_json(const Stage2Artifact& artifact);
Stage2Artifact stage2_from_json(const nlohmann::json& j);

struct Stage3Artifact {
  restoration::RestoreResult result;
  std::vector<restoration::RestorationTarget> targets;
  std::vector<int> target_slots;  // slot number per target
  std::vector<int> skipped_slots; // unresolved, not restored
};

Stage3Artifact run_stage3(const Image& page, const Stage2Artifact& stage2, InpaintBackend& inpaint,
                          const GlyphAtlas& atlas, const PipelineConfig& config);

nlohmann::json to_json(const Stage3Artifact& artifact);

}  // namespace docrestore::pipeline
