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

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "docrestore/core/annotation_io.h"
#include "docrestore/core/image.h"

namespace docrestore::pipeline {

inline constexpr int kJobSchemaVersion = 1;
inline constexpr int kStageCount = 3;

enum class StageStatus { kPending, kRunning, kDone, kFailed, kOverridden };

std::string_view to_string(StageStatus status);
StageStatus parse_stage_status(std::string_view text);

// Done or overridden: the stage has a usable artifact.
inline bool is_settled(StageStatus s) { return s == StageStatus::kDone || s == StageStatus::kOverridden; }

struct StageState {
  StageStatus status = StageStatus::kPending;
  std::string error;
  std::string updated_at;
};

// A human choice for one Stage-2 slot.
struct Selection {
  int slot = 0;
  std::string label;
  std::optional<int> rank;  // 1-based position in the stored ranking
  bool free_text = false;
  bool operator==(const Selection&) const = default;
};

struct RestorationJob {
  std::string id;
  ImageRef page;
  std::uint64_t seed = 0;
  std::uint64_t version = 0;
  std::array<StageState, kStageCount> stages;  // index 0 = Stage 1
  std::vector<Selection> selections;
  std::size_t box_edits = 0;  // box edit operations applied since creation
  nlohmann::json config;      // PipelineConfig the job runs with
  std::string created_at;
  std::string updated_at;

  StageState& stage(int n) { return stages.at(static_cast<std::size_t>(n - 1)); }
  const StageState& stage(int n) const { return stages.at(static_cast<std::size_t>(n - 1)); }
};

nlohmann::json to_json(const RestorationJob& job);
RestorationJob job_from_json(const nlohmann::json& j);

std::string now_iso8601();

// Artifact file names inside a job directory.
namespace artifact {
inline constexpr const char* kJob = "job.json";
inline constexpr const char* kPage = "page.png";
inline constexpr const char* kInput = "input.json";
inline constexpr const char* kRestored = "restored.png";
inline constexpr const char* kContent = "content.png";
std::string stage(int n);  // "stage<n>.json"
}  // namespace artifact

// Per-job directory tree. Every file is published by write-then-rename, so
// readers never see partial content. Mutations of one job are serialized by
// the caller holding lock(id).
class JobStore {
 public:
  explicit JobStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path dir(const std::string& id) const;
  bool exists(const std::string& id) const;

  // Creates a job from a page and its input annotation. With no id a fresh
  // "job-NNNNNN" id is allocated. An existing job with the same id is
  // replaced.
  RestorationJob create(const Image& page, const AnnotationDoc& input, const nlohmann::json& config,
                        std::uint64_t seed, std::optional<std::string> id = std::nullopt);

  // Throws NotFoundError for unknown ids and ParseError for corrupt files.
  RestorationJob load(const std::string& id) const;
  void save(RestorationJob& job) const;  // stamps updated_at
  std::vector<std::string> list() const;

  std::mutex& lock(const std::string& id);

  std::optional<nlohmann::json> read_json(const std::string& id, const std::string& name) const;
  void write_json(const std::string& id, const std::string& name, const nlohmann::json& value) const;
  std::optional<Image> read_image(const std::string& id, const std::string& name) const;
  void write_image(const std::string& id, const std::string& name, const Image& image) const;
  void remove(const std::string& id, const std::string& name) const;

  Image page_image(const std::string& id) const;
  AnnotationDoc input_annotation(const std::string& id) const;

 private:
  static void check_id(const std::string& id);

  std::filesystem::path root_;
  std::mutex locks_guard_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
  std::mutex create_guard_;
};

}  // namespace docrestore::pipeline
