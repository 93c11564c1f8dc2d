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


#include <gtest/gtest.h>

#include <set>

#include "docrestore/core/errors.h"
#include "docrestore/core/rng.h"
#include "docrestore/core/types.h"
#include "docrestore/core/utf8.h"

namespace docrestore {
namespace {

TEST(CharObservation, EmptyCandidatesHaveZeroConfidence) {
  CharObservation obs({0, 0, 5, 5}, {}, ObservationSource::kDamageDetector);
  EXPECT_EQ(obs.confidence(), 0.0);
  EXPECT_EQ(obs.top_label(), "");
}

TEST(CharObservation, CandidatesSortedAndDeduplicated) {
  CharObservation obs({0, 0, 5, 5}, {{"b", 0.2}, {"a", 0.7}, {"b", 0.1}, {"c", 0.2}});
  ASSERT_EQ(obs.candidates().size(), 3u);
  EXPECT_EQ(obs.candidates()[0], (Candidate{"a", 0.7}));
  // Equal probabilities fall back to label order.
  EXPECT_EQ(obs.candidates()[1], (Candidate{"b", 0.2}));
  EXPECT_EQ(obs.candidates()[2], (Candidate{"c", 0.2}));
  EXPECT_DOUBLE_EQ(obs.confidence(), 0.7);
}

TEST(CharObservation, TruncatesToK) {
  CharObservation obs({0, 0, 5, 5}, {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}}, ObservationSource::kOcr, 2);
  EXPECT_EQ(obs.candidates().size(), 2u);
}

TEST(CharObservation, InvariantHoldsForRandomInputs) {
  Rng rng(5);
  const std::vector<std::string> labels{"a", "b", "c", "d", "e"};
  for (int t = 0; t < 500; ++t) {
    std::vector<Candidate> raw;
    const auto n = rng.below(8);
    for (std::uint64_t i = 0; i < n; ++i) raw.push_back({labels[rng.below(labels.size())], rng.uniform()});
    CharObservation obs({0, 0, 1, 1}, raw);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < obs.candidates().size(); ++i) {
      EXPECT_TRUE(seen.insert(obs.candidates()[i].label).second);
      if (i > 0) EXPECT_GE(obs.candidates()[i - 1].prob, obs.candidates()[i].prob);
    }
    if (!obs.candidates().empty()) EXPECT_EQ(obs.confidence(), obs.candidates().front().prob);
  }
}

TEST(Enums, RoundTripThroughText) {
  for (auto g : {DamageGrade::kLight, DamageGrade::kMedium, DamageGrade::kSevere}) {
    EXPECT_EQ(parse_damage_grade(to_string(g)), g);
  }
  for (auto s : {ObservationSource::kOcr, ObservationSource::kDamageDetector, ObservationSource::kHuman}) {
    EXPECT_EQ(parse_observation_source(to_string(s)), s);
  }
  EXPECT_EQ(to_string(ObservationSource::kDamageDetector), "damage-detector");
  EXPECT_THROW(parse_damage_grade("catastrophic"), ContractError);
}

TEST(Utf8, SplitsCodePoints) {
  const auto cps = split_code_points("a天地b");
  ASSERT_EQ(cps.size(), 4u);
  EXPECT_EQ(cps[1], "天");
  EXPECT_EQ(join(cps), "a天地b");
}

TEST(Rng, SameSeedSameStream) {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(mix_seed(1, 2), mix_seed(1, 3));
  EXPECT_NE(mix_seed(1, "ocr"), mix_seed(1, "lm"));
}

TEST(Rng, SampleIndicesDistinctSorted) {
  Rng rng(3);
  const auto idx = rng.sample_indices(20, 7);
  ASSERT_EQ(idx.size(), 7u);
  for (std::size_t i = 1; i < idx.size(); ++i) EXPECT_LT(idx[i - 1], idx[i]);
}

}  // namespace
}  // namespace docrestore
