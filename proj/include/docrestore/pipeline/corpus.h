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
#include <vector>

#include "docrestore/pipeline/config.h"
#include "docrestore/pipeline/pipeline.h"

namespace docrestore::pipeline {

// Imperfect damage detector: drops each truth box with probability
// 1 - recall and perturbs the survivors' coordinates by up to +-jitter,
// clamped to the page. Grades are kept, gt labels stripped.
std::vector<DamageBox> simulate_detector(std::span<const DamageBox> truth, int width, int height,
                                         const DetectorSimConfig& config, std::uint64_t seed);

struct CorpusPage {
  Image clean;
  Image damaged;
  AnnotationDoc ground_truth;  // true damage boxes, grades, labels
  AnnotationDoc input;         // detector boxes; char truth kept for stub oracles
};

// Page i uses seed page_seed(config.seed, i) for layout, degradation and
// detector noise.
CorpusPage synthesize_page(const PipelineConfig& config, const GlyphAtlas& atlas, std::size_t index);

// Writes page_NNN.png (damaged), page_NNN.clean.png, page_NNN.json (input)
// and page_NNN.gt.json into dir; returns the pipeline inputs.
std::vector<PageInput> write_corpus(const PipelineConfig& config, std::size_t pages,
                                    const std::filesystem::path& dir);

// page_NNN.json -> page_NNN.gt.json
std::filesystem::path ground_truth_path(const std::filesystem::path& input_annotation);

}  // namespace docrestore::pipeline
