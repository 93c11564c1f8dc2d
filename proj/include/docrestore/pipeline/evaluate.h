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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "docrestore/metrics/metrics.h"
#include "docrestore/pipeline/config.h"
#include "docrestore/pipeline/job.h"

namespace docrestore::pipeline {

struct EvalPage {
  std::string job_id;
  std::filesystem::path ground_truth;  // annotation with gt labels, grades, damage boxes
};

// AR of the damaged and restored page for one bucket.
struct BucketAr {
  std::optional<metrics::ArResult> damaged;
  std::optional<metrics::ArResult> restored;
};

struct PageReport {
  std::string job_id;
  std::map<std::string, BucketAr> ar;
  std::size_t slots = 0;
  bool restored = false;  // Stage 3 output present
};

struct EvalReport {
  // Buckets: "light", "medium", "severe" (characters by their own damage
  // grade), "undamaged" and "all".
  std::map<std::string, BucketAr> ar;
  std::optional<double> top1;
  std::optional<double> top5;
  std::size_t scored_slots = 0;  // Stage-2 slots matched to a gt char
  std::size_t predicted_boxes = 0;
  std::size_t truth_boxes = 0;
  std::size_t matched_boxes = 0;
  metrics::DetectionResult detection;  // pooled over pages
  std::vector<PageReport> pages;
};

inline const std::vector<std::string>& ar_buckets() {
  static const std::vector<std::string> buckets{"light", "medium", "severe", "undamaged", "all"};
  return buckets;
}

// Reads every gt character of the damaged and the restored page with the
// template recognizer and scores them against the gt labels, in gt reading
// order. Missing Stage-3 output scores the damaged page as restored.
// Throws ValidationError naming the page when the annotation does not fit.
EvalReport evaluate(const PipelineConfig& config, const JobStore& store, const std::vector<EvalPage>& pages);

nlohmann::json to_json(const EvalReport& report);
std::string format_table(const EvalReport& report);

}  // namespace docrestore::pipeline
