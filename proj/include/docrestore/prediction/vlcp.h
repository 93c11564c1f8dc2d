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

#include "docrestore/core/backends.h"
#include "docrestore/core/types.h"
#include "docrestore/localization/fusion.h"

namespace docrestore::prediction {

// Vision-language candidate fusion parameters. Defaults are the published
// settings.
struct VlcpParams {
  double tau = 0.9;     // OCR confidence above which OCR is taken as-is
  double w_o = 0.6;     // OCR probability weight
  double w_l = 0.4;     // LM probability weight
  double alpha = 0.05;  // rank score weight
  double beta = 1.5;    // multiplier for labels proposed by both models
  int k = 5;            // Top-k depth

  void validate() const;  // throws ContractError
};

// One label's score breakdown. Ranks are 0-based positions; a label absent
// from a list gets rank k and probability 0 on that side.
struct ScoredCandidate {
  std::string label;
  double p_o = 0;
  double p_l = 0;
  int r_o = 0;
  int r_l = 0;
  double base = 0;        // w_o*p_o + w_l*p_l
  double rank_score = 0;  // alpha*(2k - r_o - r_l)
  bool bonus_applied = false;
  double composite = 0;   // (base + rank_score) * (beta if bonus_applied else 1)
  bool operator==(const ScoredCandidate&) const = default;
};

// Scores `label` against the two Top-k lists. Throws ContractError when the
// label is in neither.
ScoredCandidate vlcp_score(const std::string& label, std::span<const Candidate> ocr_topk,
                           std::span<const Candidate> lm_topk, const VlcpParams& params);

// Scores every label of the union once, sorted by composite descending; ties
// go to the higher p_o, then the lexicographically smaller label. Lists
// longer than k are truncated. Throws ContractError when both are empty.
std::vector<ScoredCandidate> vlcp_select(std::span<const Candidate> ocr_topk,
                                         std::span<const Candidate> lm_topk,
                                         const VlcpParams& params);

enum class SlotRoute { kOcrShortcut, kFused, kUnresolved };

std::string_view to_string(SlotRoute route);
SlotRoute parse_slot_route(std::string_view text);

struct SlotPrediction {
  int slot = 0;
  BBox box;
  SlotRoute route = SlotRoute::kUnresolved;
  std::optional<std::string> label;
  std::vector<Candidate> ocr_candidates;
  std::vector<Candidate> lm_candidates;
  std::vector<ScoredCandidate> ranked;
  std::string error;

  std::vector<std::string> top_labels(std::size_t n) const;
};

struct VlcpResult {
  std::vector<SlotPrediction> slots;
  int lm_calls = 0;
};

// Runs candidate fusion for every slot of `masked`. OCR is asked first; a
// slot whose OCR confidence exceeds tau takes the OCR top-1 and is not sent
// to the LM (its prediction is written into the LM context instead). The
// remaining slots are renumbered 1..m and resolved by one LM request.
// Backend failures leave the affected slots unresolved with an error.
VlcpResult vlcp_predict(const localization::MaskedText& masked, const Image& page,
                        OcrBackend& ocr, LmBackend& lm, const VlcpParams& params);

}  // namespace docrestore::prediction
