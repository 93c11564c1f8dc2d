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


#include "docrestore/pipeline/corpus.h"

#include <cstdio>

#include "docrestore/core/rng.h"

namespace docrestore::pipeline {

namespace fs = std::filesystem;

std::vector<DamageBox> simulate_detector(std::span<const DamageBox> truth, int width, int height,
                                         const DetectorSimConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DamageBox> out;
  for (const auto& t : truth) {
    const bool keep = rng.bernoulli(config.recall);
    double d[4];
    for (double& v : d) v = rng.uniform(-config.jitter, config.jitter);
    if (!keep) continue;
    BBox b{std::max(0.0, t.box.x_min + d[0]), std::max(0.0, t.box.y_min + d[1]),
           std::min<double>(width, t.box.x_max + d[2]), std::min<double>(height, t.box.y_max + d[3])};
    if (!is_well_formed(b)) b = t.box;
    out.push_back({b, t.grade, std::nullopt});
  }
  return out;
}

CorpusPage synthesize_page(const PipelineConfig& config, const GlyphAtlas& atlas, std::size_t index) {
  const std::uint64_t seed = page_seed(config.seed, index);
  auto toy = synthesis::generate_toy_page(config.toy, atlas, mix_seed(seed, "layout"));
  auto recipe = config.synthesis;
  recipe.seed = mix_seed(seed, "damage");
  auto pair = synthesis::make_pair(toy.image, toy.annotation, recipe);

  CorpusPage page;
  page.clean = std::move(pair.clean);
  page.damaged = std::move(pair.damaged);
  page.ground_truth = std::move(pair.annotation);
  page.input = page.ground_truth;
  page.input.page.damage_boxes = simulate_detector(page.ground_truth.page.damage_boxes, page.damaged.width(),
                                                   page.damaged.height(), config.detector,
                                                   mix_seed(seed, "detector"));
  return page;
}

std::vector<PageInput> write_corpus(const PipelineConfig& config, std::size_t pages, const fs::path& dir) {
  fs::create_directories(dir);
  const GlyphAtlas atlas = load_atlas(config.atlas);
  std::vector<PageInput> inputs;
  for (std::size_t i = 0; i < pages; ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "page_%03zu", i);
    auto page = synthesize_page(config, atlas, i);
    const fs::path image = dir / (std::string(stem) + ".png");
    page.input.page.image.path = image.filename().string();
    page.ground_truth.page.image.path = image.filename().string();
    write_png(page.damaged, image);
    write_png(page.clean, dir / (std::string(stem) + ".clean.png"));
    write_annotation(page.input, dir / (std::string(stem) + ".json"));
    write_annotation(page.ground_truth, dir / (std::string(stem) + ".gt.json"));
    inputs.push_back({image, dir / (std::string(stem) + ".json"), std::string(stem)});
  }
  return inputs;
}

fs::path ground_truth_path(const fs::path& input_annotation) {
  fs::path p = input_annotation;
  return p.replace_extension(".gt.json");
}

}  // namespace docrestore::pipeline
