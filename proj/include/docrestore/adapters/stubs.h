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

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "docrestore/core/backends.h"
#include "docrestore/core/glyph_atlas.h"

namespace docrestore::adapters {

// How a simulated recognizer behaves on one damage grade.
struct GradeProfile {
  double top1_accuracy = 1.0;   // truth ranked first
  double topk_inclusion = 1.0;  // truth anywhere in the Top-k (>= top1)
  double conf_lo = 0.95;        // range of the top candidate's probability
  double conf_hi = 0.99;
  // Near-uniform candidates: every probability in [0.5/|A|, 2/|A|] for
  // alphabet size |A|.
  bool uniform = false;
};

struct OracleChar {
  BBox box;
  std::string label;
  std::optional<DamageGrade> grade;  // none = undamaged
};

struct StubOcrConfig {
  std::vector<OracleChar> oracle;
  std::vector<std::string> alphabet;  // decoy source
  GradeProfile clean{1.0, 1.0, 0.95, 0.99, false};
  GradeProfile light{0.97, 1.0, 0.92, 0.99, false};
  GradeProfile medium{0.7, 0.95, 0.3, 0.85, false};
  GradeProfile severe{0.0, 0.6, 0.0, 0.0, true};
  double match_iou = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Recognizer driven by annotated truth. The queried box is matched to the
// oracle by IoU; candidates follow the matched character's grade profile.
// Unmatched boxes get no candidates.
class StubOcr : public OcrBackend {
 public:
  explicit StubOcr(StubOcrConfig config);
  std::vector<Candidate> recognize(const Image& page, const BBox& box, int k) override;
  int calls() const { return calls_.load(); }

 private:
  StubOcrConfig config_;
  std::atomic<int> calls_{0};
};

struct StubLmConfig {
  // Truth per reading position; the n-th token of a request context (a
  // code point or a mask marker) maps to transcript[n].
  std::vector<std::optional<std::string>> transcript;
  std::vector<std::string> decoys;
  double top1_accuracy = 0.9;
  double top5_inclusion = 0.97;
  double hit_prob_lo = 0.4;  // probability given to the first candidate
  double hit_prob_hi = 0.8;
  std::uint64_t seed = 0;

  void validate() const;
};

// Masked language model stand-in. Per slot the truth is ranked first with
// probability top1_accuracy, otherwise placed at a random rank 1..k-1 so
// that it appears in the Top-k at rate top5_inclusion, otherwise left out;
// decoys fill the rest. Slots without transcript coverage get decoys only.
class StubLm : public LmBackend {
 public:
  explicit StubLm(StubLmConfig config);
  LmResponse predict(const LmRequest& request) override;

  int calls() const { return calls_.load(); }
  // Total mask slots received across all calls.
  int slot_queries() const { return slot_queries_.load(); }

 private:
  StubLmConfig config_;
  std::atomic<int> calls_{0};
  std::atomic<int> slot_queries_{0};
};

// Splits an LM context into tokens: "[maskN]" markers and single code
// points. Marker tokens carry their slot number, others 0.
struct ContextToken {
  std::string text;
  int slot = 0;
};
std::vector<ContextToken> tokenize_context(const std::string& context);

enum class InpaintMode { kBlend, kIdentity, kStamp };

// Inpainting stand-ins. kBlend paints the content glyph in the patch's ink
// colour over its background median; kIdentity returns x_d; kStamp fills the
// mask with a constant.
class StubInpaint : public InpaintBackend {
 public:
  explicit StubInpaint(InpaintMode mode = InpaintMode::kBlend, std::uint8_t stamp_value = 0)
      : mode_(mode), stamp_value_(stamp_value) {}
  Image inpaint(const InpaintRequest& request) override;
  int calls() const { return calls_.load(); }

 private:
  InpaintMode mode_;
  std::uint8_t stamp_value_;
  std::atomic<int> calls_{0};
};

// Throws ContractError unless x_c and x_m are single-channel and match x_d.
void check_inpaint_shapes(const InpaintRequest& request);

struct TemplateOcrConfig {
  double ink_threshold = 128;   // luminance below which a pixel is ink
  double min_similarity = 0.5;  // best match below this -> no candidates
  double temperature = 0.05;    // softmax temperature over similarities
};

// Pixel-reading recognizer: binarizes the box and ranks atlas glyphs by
// Jaccard similarity of ink, rendered at the box size.
class TemplateOcr : public OcrBackend {
 public:
  TemplateOcr(GlyphAtlas atlas, TemplateOcrConfig config = {});
  std::vector<Candidate> recognize(const Image& page, const BBox& box, int k) override;
  // Top-1 label, or nothing when the best similarity is under the floor.
  std::optional<std::string> read(const Image& page, const BBox& box);

 private:
  struct Match {
    std::string label;
    double similarity;
  };
  std::vector<Match> rank(const Image& page, const BBox& box) const;

  GlyphAtlas atlas_;
  TemplateOcrConfig config_;
};

}  // namespace docrestore::adapters
