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

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "docrestore/adapters/remote.h"
#include "docrestore/adapters/stubs.h"
#include "docrestore/localization/fusion.h"
#include "docrestore/prediction/vlcp.h"
#include "docrestore/restoration/par.h"
#include "docrestore/synthesis/degradation.h"

namespace docrestore::pipeline {

enum class BackendKind { kStub, kRemote };

std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view text);

// Stub OCR settings. The oracle itself comes from each page's annotation.
struct StubOcrSettings {
  adapters::GradeProfile clean{1.0, 1.0, 0.95, 0.99, false};
  adapters::GradeProfile light{0.97, 1.0, 0.92, 0.99, false};
  adapters::GradeProfile medium{0.7, 0.95, 0.3, 0.85, false};
  adapters::GradeProfile severe{0.0, 0.6, 0.0, 0.0, true};
  double match_iou = 0.5;
};

struct StubLmSettings {
  double top1_accuracy = 0.9;
  double top5_inclusion = 0.97;
  double hit_prob_lo = 0.4;
  double hit_prob_hi = 0.8;
};

struct OcrBackendConfig {
  BackendKind kind = BackendKind::kStub;
  StubOcrSettings stub;
  adapters::RemoteConfig remote;
};

struct LmBackendConfig {
  BackendKind kind = BackendKind::kStub;
  StubLmSettings stub;
  adapters::RemoteConfig remote;
};

struct InpaintBackendConfig {
  BackendKind kind = BackendKind::kStub;
  adapters::InpaintMode mode = adapters::InpaintMode::kBlend;
  int stamp_value = 0;
  adapters::RemoteConfig remote;
};

// Glyph source for rendering content images and for synthesis.
struct AtlasConfig {
  std::optional<std::filesystem::path> path;  // else procedural
  int cell_size = 16;
  std::uint64_t seed = 7;
};

// Simulated damage detector used by `synth` to produce detector boxes
// from ground truth.
struct DetectorSimConfig {
  double recall = 0.9;
  double jitter = 2.0;  // max absolute coordinate perturbation, pixels
};

struct EvaluationConfig {
  adapters::TemplateOcrConfig ocr;
  double match_iou = 0.5;  // slot/box to ground-truth char matching
};

struct PipelineConfig {
  OcrBackendConfig ocr;
  LmBackendConfig lm;
  InpaintBackendConfig inpaint;
  localization::FusionParams fusion;
  prediction::VlcpParams vlcp;
  restoration::ParParams par;
  localization::Layout layout = localization::Layout::kVerticalRtl;
  // A char overlapping a fused damage box at IoU above this is treated as
  // damaged, not legible.
  double legible_overlap_iou = 0.5;
  synthesis::DegradationRecipe synthesis;
  synthesis::ToyPageSpec toy;
  DetectorSimConfig detector;
  AtlasConfig atlas;
  EvaluationConfig evaluation;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;  // throws ContractError naming the field
};

// Recipe applied when no config overrides it: all three degradations.
synthesis::DegradationRecipe default_recipe();
PipelineConfig default_config();

nlohmann::json to_json(const PipelineConfig& config);
// Missing fields keep their defaults; wrong types raise ParseError with the
// field path.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);

// Applies DOCRESTORE_OCR_ENDPOINT, DOCRESTORE_LM_ENDPOINT and
// DOCRESTORE_INPAINT_ENDPOINT when set.
void apply_env_overrides(PipelineConfig& config);

GlyphAtlas load_atlas(const AtlasConfig& config);

// Per-page seed derived from the root seed and page index.
std::uint64_t page_seed(std::uint64_t root, std::size_t page_index);

}  // namespace docrestore::pipeline
