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


#include "docrestore/prediction/text_corruption.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "docrestore/core/errors.h"
#include "docrestore/core/rng.h"
#include "docrestore/core/utf8.h"
#include "docrestore/localization/fusion.h"

namespace docrestore::prediction {

CorruptedText corrupt_text(std::string_view text, double mask_ratio, double deletion_prob,
                           std::uint64_t seed) {
  if (!(mask_ratio >= kMinMaskRatio && mask_ratio <= kMaxMaskRatio)) {
    throw ContractError("mask_ratio must lie in [0.05, 0.90]");
  }
  if (!(deletion_prob >= 0 && deletion_prob <= 1)) {
    throw ContractError("deletion_prob must lie in [0, 1]");
  }
  const auto chars = split_code_points(text);
  if (chars.empty()) throw ContractError("text must be non-empty");

  // Tolerance keeps e.g. 0.9 * 10 from flooring to 8 on representation error.
  const auto mask_count =
      static_cast<std::size_t>(std::floor(mask_ratio * static_cast<double>(chars.size()) + 1e-9));
  Rng rng(seed);
  const auto masked_positions = rng.sample_indices(chars.size(), mask_count);

  CorruptedText out;
  std::size_t cursor = 0;
  int slot = 1;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (cursor < masked_positions.size() && masked_positions[cursor] == i) {
      ++cursor;
      out.masked += localization::mask_marker(slot++);
      out.targets.push_back(chars[i]);
      continue;
    }
    if (rng.bernoulli(deletion_prob)) continue;
    out.masked += chars[i];
  }
  return out;
}

std::string apply_variant_augmentation(std::string_view text, const VariantTable& table,
                                       double replace_prob, std::uint64_t seed) {
  if (!(replace_prob >= 0 && replace_prob <= 1)) {
    throw ContractError("replace_prob must lie in [0, 1]");
  }
  Rng rng(seed);
  std::string out;
  for (const auto& ch : split_code_points(text)) {
    auto it = table.find(ch);
    if (it == table.end() || it->second.empty()) {
      out += ch;
      continue;
    }
    if (rng.bernoulli(replace_prob)) {
      out += it->second[rng.below(it->second.size())];
    } else {
      out += ch;
    }
  }
  return out;
}

VariantTable load_variant_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open variant table " + path.string());
  VariantTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string standard, variant;
    if (!(ss >> standard)) continue;
    auto& variants = table[standard];
    while (ss >> variant) variants.push_back(variant);
  }
  return table;
}

}  // namespace docrestore::prediction
