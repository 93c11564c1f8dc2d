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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "docrestore/core/geometry.h"

namespace docrestore::metrics {

struct ArResult {
  std::size_t n_t = 0;  // reference length
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  double ar = 0;  // (N_t - D - S - I) / N_t; negative when insertions abound

  std::size_t errors() const { return deletions + substitutions + insertions; }
  ArResult& operator+=(const ArResult& other);  // pools counts, recomputes ar
};

// Accurate rate from a unit-cost edit alignment of token sequences. Among
// minimal alignments the backtrace prefers fewer substitutions, then fewer
// insertions. Throws ContractError for an empty reference.
ArResult ar(std::span<const std::string> reference, std::span<const std::string> hypothesis);
// UTF-8 convenience overload: one token per code point.
ArResult ar(std::string_view reference, std::string_view hypothesis);

// Share of slots whose truth is among the first k candidates. Throws
// ContractError for k < 1, an empty slot set or mismatched lengths.
double topk_accuracy(std::span<const std::vector<std::string>> candidates,
                     std::span<const std::string> truth, std::size_t k);

struct ScoredBox {
  BBox box;
  double confidence = 1;
};

struct DetectionResult {
  double precision = 0;  // 0 when there are no predictions
  double recall = 0;     // 0 when there is no ground truth
  double f1 = 0;         // 0 when precision + recall == 0
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (pred, gt)
};

// Greedy matching: predictions in descending confidence (stable), each
// takes the unmatched ground truth with the highest IoU >= threshold (ties
// to the lower index).
DetectionResult detection_prf(std::span<const ScoredBox> predictions, std::span<const BBox> truth,
                              double iou_threshold = 0.5);

}  // namespace docrestore::metrics
