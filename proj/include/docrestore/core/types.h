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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docrestore/core/geometry.h"

namespace docrestore {

// Severity of a damaged character, by how legible it remains.
//   light:  reliably identifiable despite visible damage
//   medium: identifiable only through careful examination
//   severe: structure completely lost
enum class DamageGrade { kLight, kMedium, kSevere };

std::string_view to_string(DamageGrade grade);
DamageGrade parse_damage_grade(std::string_view text);  // throws ContractError

enum class ObservationSource { kOcr, kDamageDetector, kHuman };

std::string_view to_string(ObservationSource source);
ObservationSource parse_observation_source(std::string_view text);

struct Candidate {
  std::string label;
  double prob = 0;
  bool operator==(const Candidate&) const = default;
};

// Sorts by descending probability (ties: smaller label first), keeps the
// highest-probability entry per label, then truncates to `k` entries when
// k > 0.
std::vector<Candidate> normalize_candidates(std::vector<Candidate> candidates, int k = 0);

// A localized character with its ranked recognition candidates. Candidates
// are normalized on construction; confidence is the top probability, or 0
// when there are no candidates.
class CharObservation {
 public:
  CharObservation() = default;
  CharObservation(BBox box, std::vector<Candidate> candidates,
                  ObservationSource source = ObservationSource::kOcr, int k = 0);

  const BBox& box() const { return box_; }
  const std::vector<Candidate>& candidates() const { return candidates_; }
  ObservationSource source() const { return source_; }
  double confidence() const { return candidates_.empty() ? 0.0 : candidates_.front().prob; }
  // Top-1 label, empty when there are no candidates.
  std::string top_label() const {
    return candidates_.empty() ? std::string{} : candidates_.front().label;
  }

  bool operator==(const CharObservation&) const = default;

 private:
  BBox box_;
  std::vector<Candidate> candidates_;
  ObservationSource source_ = ObservationSource::kOcr;
};

struct DamageBox {
  BBox box;
  std::optional<DamageGrade> grade;
  std::optional<std::string> gt_label;
  bool operator==(const DamageBox&) const = default;
};

enum class SlotKind { kLegible, kDamaged };

std::string_view to_string(SlotKind kind);
SlotKind parse_slot_kind(std::string_view text);

// One entry of a page's reading order. `index` points into
// PageDocument::chars for legible slots and into damage_boxes for damaged.
struct ReadingPosition {
  SlotKind kind = SlotKind::kLegible;
  std::size_t index = 0;
  BBox box;
  bool operator==(const ReadingPosition&) const = default;
};

struct ImageRef {
  std::string path;
  int width = 0;
  int height = 0;
  bool operator==(const ImageRef&) const = default;
};

struct PageDocument {
  ImageRef image;
  std::vector<CharObservation> chars;
  std::vector<DamageBox> damage_boxes;
  // Each line is an ordered list of positions (kind + index, box ignored).
  std::vector<std::vector<ReadingPosition>> lines;
  std::vector<ReadingPosition> reading_order;
  bool operator==(const PageDocument&) const = default;
};

// Ground truth attached to one entry of PageDocument::chars.
struct CharTruth {
  std::optional<DamageGrade> grade;
  std::optional<std::string> gt_label;
  bool operator==(const CharTruth&) const = default;
};

// A page plus ground-truth labels and grades; char_truth is parallel to
// page.chars.
struct AnnotationDoc {
  PageDocument page;
  std::vector<CharTruth> char_truth;
  bool operator==(const AnnotationDoc&) const = default;
};

}  // namespace docrestore
