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


#include "docrestore/prediction/vlcp.h"

#include <algorithm>
#include <map>
#include <set>

#include "docrestore/core/errors.h"

namespace docrestore::prediction {

void VlcpParams::validate() const {
  auto unit = [](double v) { return v >= 0 && v <= 1; };
  if (!unit(tau) || !unit(w_o) || !unit(w_l)) throw ContractError("tau, w_o and w_l must lie in [0,1]");
  if (!(alpha >= 0)) throw ContractError("alpha must be >= 0");
  if (!(beta >= 1)) throw ContractError("beta must be >= 1");
  if (k < 1) throw ContractError("k must be >= 1");
}

namespace {

std::span<const Candidate> head(std::span<const Candidate> list, int k) {
  return list.first(std::min(list.size(), static_cast<std::size_t>(k)));
}

// Position of `label` in `list`, or -1.
int find_rank(std::span<const Candidate> list, const std::string& label) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

ScoredCandidate score_in_lists(const std::string& label, std::span<const Candidate> ocr,
                               std::span<const Candidate> lm, const VlcpParams& params) {
  const int ro = find_rank(ocr, label);
  const int rl = find_rank(lm, label);
  if (ro < 0 && rl < 0) throw ContractError("label '" + label + "' is in neither candidate list");
  ScoredCandidate s;
  s.label = label;
  s.p_o = ro >= 0 ? ocr[static_cast<std::size_t>(ro)].prob : 0.0;
  s.p_l = rl >= 0 ? lm[static_cast<std::size_t>(rl)].prob : 0.0;
  s.r_o = ro >= 0 ? ro : params.k;
  s.r_l = rl >= 0 ? rl : params.k;
  s.base = params.w_o * s.p_o + params.w_l * s.p_l;
  s.rank_score = params.alpha * (2 * params.k - s.r_o - s.r_l);
  s.bonus_applied = ro >= 0 && rl >= 0;
  s.composite = (s.base + s.rank_score) * (s.bonus_applied ? params.beta : 1.0);
  return s;
}

}  // namespace

ScoredCandidate vlcp_score(const std::string& label, std::span<const Candidate> ocr_topk,
                           std::span<const Candidate> lm_topk, const VlcpParams& params) {
  return score_in_lists(label, head(ocr_topk, params.k), head(lm_topk, params.k), params);
}

std::vector<ScoredCandidate> vlcp_select(std::span<const Candidate> ocr_topk,
                                         std::span<const Candidate> lm_topk,
                                         const VlcpParams& params) {
  const auto ocr = head(ocr_topk, params.k);
  const auto lm = head(lm_topk, params.k);
  if (ocr.empty() && lm.empty()) throw ContractError("no candidates");
  std::vector<ScoredCandidate> out;
  std::set<std::string> seen;
  for (auto list : {ocr, lm}) {
    for (const auto& c : list) {
      if (seen.insert(c.label).second) out.push_back(score_in_lists(c.label, ocr, lm, params));
    }
  }
  std::sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.composite != b.composite) return a.composite > b.composite;
    if (a.p_o != b.p_o) return a.p_o > b.p_o;
    return a.label < b.label;
  });
  return out;
}

std::string_view to_string(SlotRoute route) {
  switch (route) {
    case SlotRoute::kOcrShortcut: return "ocr-shortcut";
    case SlotRoute::kFused: return "fused";
    case SlotRoute::kUnresolved: return "unresolved";
  }
  return "unresolved";
}

SlotRoute parse_slot_route(std::string_view text) {
  if (text == "ocr-shortcut") return SlotRoute::kOcrShortcut;
  if (text == "fused") return SlotRoute::kFused;
  if (text == "unresolved") return SlotRoute::kUnresolved;
  throw ContractError("unknown slot route '" + std::string(text) + "'");
}

std::vector<std::string> SlotPrediction::top_labels(std::size_t n) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < n; ++i) out.push_back(ranked[i].label);
  return out;
}

VlcpResult vlcp_predict(const localization::MaskedText& masked, const Image& page,
                        OcrBackend& ocr, LmBackend& lm, const VlcpParams& params) {
  params.validate();
  VlcpResult result;
  result.slots.resize(masked.slots.size());
  std::vector<bool> pending(masked.slots.size(), false);

  for (std::size_t i = 0; i < masked.slots.size(); ++i) {
    auto& pred = result.slots[i];
    pred.slot = masked.slots[i].slot;
    pred.box = masked.slots[i].box;
    try {
      pred.ocr_candidates = normalize_candidates(ocr.recognize(page, pred.box, params.k), params.k);
    } catch (const std::exception& e) {
      pred.route = SlotRoute::kUnresolved;
      pred.error = std::string("ocr: ") + e.what();
      continue;
    }
    if (!pred.ocr_candidates.empty() && pred.ocr_candidates.front().prob > params.tau) {
      pred.route = SlotRoute::kOcrShortcut;
      pred.label = pred.ocr_candidates.front().label;
      pred.ranked = vlcp_select(pred.ocr_candidates, {}, params);
    } else {
      pending[i] = true;
    }
  }

  // LM context: shortcut predictions are written in as text; every other
  // slot stays masked and is renumbered.
  std::string context;
  std::map<int, std::size_t> lm_slot_to_index;
  std::size_t slot_cursor = 0;
  int next = 1;
  for (const auto& token : masked.tokens) {
    if (!token.is_slot) {
      context += token.label;
      continue;
    }
    const std::size_t i = slot_cursor++;
    const auto& pred = result.slots[i];
    if (pred.route == SlotRoute::kOcrShortcut) {
      context += *pred.label;
    } else {
      if (pending[i]) lm_slot_to_index[next] = i;
      context += localization::mask_marker(next++);
    }
  }

  LmResponse lm_out;
  std::string lm_error;
  if (!lm_slot_to_index.empty()) {
    try {
      ++result.lm_calls;
      lm_out = lm.predict({context, params.k});
    } catch (const std::exception& e) {
      lm_error = std::string("lm: ") + e.what();
    }
  }

  for (const auto& [lm_slot, i] : lm_slot_to_index) {
    auto& pred = result.slots[i];
    if (!lm_error.empty()) {
      pred.route = SlotRoute::kUnresolved;
      pred.error = lm_error;
      continue;
    }
    if (auto it = lm_out.find(lm_slot); it != lm_out.end()) {
      pred.lm_candidates = normalize_candidates(it->second, params.k);
    }
    if (pred.ocr_candidates.empty() && pred.lm_candidates.empty()) {
      pred.route = SlotRoute::kUnresolved;
      pred.error = "no candidates";
      continue;
    }
    pred.ranked = vlcp_select(pred.ocr_candidates, pred.lm_candidates, params);
    pred.route = SlotRoute::kFused;
    pred.label = pred.ranked.front().label;
  }
  return result;
}

}  // namespace docrestore::prediction
