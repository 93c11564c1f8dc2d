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


#include "docrestore/core/types.h"

#include <algorithm>
#include <unordered_set>

#include "docrestore/core/errors.h"

namespace docrestore {

std::string_view to_string(DamageGrade grade) {
  switch (grade) {
    case DamageGrade::kLight: return "light";
    case DamageGrade::kMedium: return "medium";
    case DamageGrade::kSevere: return "severe";
  }
  return "light";
}

DamageGrade parse_damage_grade(std::string_view text) {
  if (text == "light") return DamageGrade::kLight;
  if (text == "medium") return DamageGrade::kMedium;
  if (text == "severe") return DamageGrade::kSevere;
  throw ContractError("unknown damage grade '" + std::string(text) + "'");
}

std::string_view to_string(ObservationSource source) {
  switch (source) {
    case ObservationSource::kOcr: return "ocr";
    case ObservationSource::kDamageDetector: return "damage-detector";
    case ObservationSource::kHuman: return "human";
  }
  return "ocr";
}

ObservationSource parse_observation_source(std::string_view text) {
  if (text == "ocr") return ObservationSource::kOcr;
  if (text == "damage-detector") return ObservationSource::kDamageDetector;
  if (text == "human") return ObservationSource::kHuman;
  throw ContractError("unknown observation source '" + std::string(text) + "'");
}

std::string_view to_string(SlotKind kind) {
  return kind == SlotKind::kLegible ? "legible" : "damaged";
}

SlotKind parse_slot_kind(std::string_view text) {
  if (text == "legible") return SlotKind::kLegible;
  if (text == "damaged") return SlotKind::kDamaged;
  throw ContractError("unknown slot kind '" + std::string(text) + "'");
}

std::vector<Candidate> normalize_candidates(std::vector<Candidate> candidates, int k) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.prob != b.prob) return a.prob > b.prob;
                     return a.label < b.label;
                   });
  std::unordered_set<std::string> seen;
  std::vector<Candidate> out;
  out.reserve(candidates.size());
  for (auto& c : candidates) {
    if (seen.insert(c.label).second) out.push_back(std::move(c));
  }
  if (k > 0 && out.size() > static_cast<std::size_t>(k)) out.resize(static_cast<std::size_t>(k));
  return out;
}

CharObservation::CharObservation(BBox box, std::vector<Candidate> candidates,
                                 ObservationSource source, int k)
    : box_(box), candidates_(normalize_candidates(std::move(candidates), k)), source_(source) {}

}  // namespace docrestore
