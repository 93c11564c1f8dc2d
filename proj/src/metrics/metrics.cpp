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


#include "docrestore/metrics/metrics.h"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "docrestore/core/errors.h"
#include "docrestore/core/utf8.h"

namespace docrestore::metrics {

ArResult& ArResult::operator+=(const ArResult& other) {
  n_t += other.n_t;
  deletions += other.deletions;
  substitutions += other.substitutions;
  insertions += other.insertions;
  ar = n_t ? (static_cast<double>(n_t) - static_cast<double>(errors())) / static_cast<double>(n_t) : 0.0;
  return *this;
}

ArResult ar(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
  if (reference.empty()) throw ContractError("AR needs a non-empty reference");
  const std::size_t n = reference.size(), m = hypothesis.size();
  // Cost = (edits, substitutions, insertions), compared lexicographically;
  // the order is compatible with addition, so the DP stays exact.
  using Cost = std::tuple<std::size_t, std::size_t, std::size_t>;
  enum Move : unsigned char { kMatch, kSub, kDel, kIns };
  std::vector<Cost> cost((n + 1) * (m + 1));
  std::vector<Move> move((n + 1) * (m + 1), kMatch);
  auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };

  for (std::size_t i = 1; i <= n; ++i) {
    cost[at(i, 0)] = {i, 0, 0};
    move[at(i, 0)] = kDel;
  }
  for (std::size_t j = 1; j <= m; ++j) {
    cost[at(0, j)] = {j, 0, j};
    move[at(0, j)] = kIns;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const bool same = reference[i - 1] == hypothesis[j - 1];
      auto [de, ds, di] = cost[at(i - 1, j - 1)];
      Cost best = same ? Cost{de, ds, di} : Cost{de + 1, ds + 1, di};
      Move bm = same ? kMatch : kSub;
      {
        auto [e, s, ins] = cost[at(i - 1, j)];
        const Cost c{e + 1, s, ins};
        if (c < best) best = c, bm = kDel;
      }
      {
        auto [e, s, ins] = cost[at(i, j - 1)];
        const Cost c{e + 1, s, ins + 1};
        if (c < best) best = c, bm = kIns;
      }
      cost[at(i, j)] = best;
      move[at(i, j)] = bm;
    }
  }

  ArResult r;
  r.n_t = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    switch (move[at(i, j)]) {
      case kMatch: --i, --j; break;
      case kSub: ++r.substitutions, --i, --j; break;
      case kDel: ++r.deletions, --i; break;
      case kIns: ++r.insertions, --j; break;
    }
  }
  r.ar = (static_cast<double>(n) - static_cast<double>(r.errors())) / static_cast<double>(n);
  return r;
}

ArResult ar(std::string_view reference, std::string_view hypothesis) {
  const auto ref = split_code_points(reference);
  const auto hyp = split_code_points(hypothesis);
  return ar(std::span<const std::string>(ref), std::span<const std::string>(hyp));
}

double topk_accuracy(std::span<const std::vector<std::string>> candidates,
                     std::span<const std::string> truth, std::size_t k) {
  if (k < 1) throw ContractError("k must be >= 1");
  if (candidates.empty()) throw ContractError("top-k accuracy over an empty slot set");
  if (candidates.size() != truth.size()) throw ContractError("candidate and truth counts differ");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& list = candidates[i];
    const auto end = list.begin() + static_cast<std::ptrdiff_t>(std::min(k, list.size()));
    hits += std::find(list.begin(), end, truth[i]) != end;
  }
  return static_cast<double>(hits) / static_cast<double>(candidates.size());
}

DetectionResult detection_prf(std::span<const ScoredBox> predictions, std::span<const BBox> truth,
                              double iou_threshold) {
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return predictions[a].confidence > predictions[b].confidence;
  });
  DetectionResult r;
  std::vector<bool> taken(truth.size(), false);
  for (std::size_t p : order) {
    double best = -1;
    std::size_t best_gt = truth.size();
    for (std::size_t g = 0; g < truth.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(predictions[p].box, truth[g]);
      if (v >= iou_threshold && v > best) {
        best = v;
        best_gt = g;
      }
    }
    if (best_gt < truth.size()) {
      taken[best_gt] = true;
      r.matches.emplace_back(p, best_gt);
    }
  }
  const double tp = static_cast<double>(r.matches.size());
  r.precision = predictions.empty() ? 0.0 : tp / static_cast<double>(predictions.size());
  r.recall = truth.empty() ? 0.0 : tp / static_cast<double>(truth.size());
  r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

}  // namespace docrestore::metrics
