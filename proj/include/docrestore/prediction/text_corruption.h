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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace docrestore::prediction {

struct CorruptedText {
  std::string masked;                // text with "[maskN]" markers
  std::vector<std::string> targets;  // original characters, slot order
};

inline constexpr double kMinMaskRatio = 0.05;
inline constexpr double kMaxMaskRatio = 0.90;
inline constexpr double kDefaultDeletionProb = 0.03;

// Builds an LM training pair: floor(mask_ratio * len) characters, chosen
// uniformly without replacement, become numbered mask slots; each other
// character is then dropped with probability deletion_prob. mask_ratio must
// lie in [0.05, 0.90]; text must be non-empty.
CorruptedText corrupt_text(std::string_view text, double mask_ratio,
                           double deletion_prob, std::uint64_t seed);

using VariantTable = std::map<std::string, std::vector<std::string>>;

// Replaces each character that has table entries, with probability
// replace_prob, by a uniformly chosen variant.
std::string apply_variant_augmentation(std::string_view text, const VariantTable& table,
                                       double replace_prob, std::uint64_t seed);

// One entry per line: the standard character followed by its variants,
// whitespace separated. Blank lines and lines starting with '#' are skipped.
VariantTable load_variant_table(const std::filesystem::path& path);

}  // namespace docrestore::prediction
