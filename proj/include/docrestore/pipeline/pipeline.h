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
#include <optional>
#include <string>
#include <vector>

#include "docrestore/pipeline/backend_provider.h"
#include "docrestore/pipeline/stages.h"

namespace docrestore::pipeline {

// Shared state for running jobs: store, atlas and backends.
class Engine {
 public:
  Engine(JobStore& store, const PipelineConfig& config);
  Engine(JobStore& store, const PipelineConfig& config, std::shared_ptr<BackendProvider> backends);

  JobStore& store() { return store_; }
  const PipelineConfig& config() const { return config_; }
  const GlyphAtlas& atlas() const { return atlas_; }

  // Runs every stage that is not done or overridden, in order; stops at the
  // first failure. Recomputing a stage resets all later stages. Holds the
  // job lock throughout. Bumps the job version when anything is recomputed.
  RestorationJob resume_job(const std::string& id);

 private:
  RestorationJob run_locked(const std::string& id);

  JobStore& store_;
  PipelineConfig config_;
  GlyphAtlas atlas_;
  std::shared_ptr<BackendProvider> backends_;
};

struct PageInput {
  std::filesystem::path image;
  std::filesystem::path annotation;
  std::optional<std::string> id;  // default: image file stem
};

struct PageRun {
  std::string id;
  bool ok = false;
  std::string error;
  std::optional<RestorationJob> job;
};

// Creates a job per page under config.output_dir/jobs and runs it on a
// pool of config.workers threads. Failures stay confined to their page.
std::vector<PageRun> run_pipeline(const PipelineConfig& config, const std::vector<PageInput>& pages,
                                  std::shared_ptr<BackendProvider> backends = nullptr);

// Marks stage n and everything after it pending and removes their
// artifacts. Caller holds the job lock.
void invalidate_from(JobStore& store, RestorationJob& job, int stage);

struct BoxEdit {
  enum class Op { kAdd, kMove, kDelete } op = Op::kAdd;
  std::optional<std::size_t> index;  // move/delete: position in the current list
  std::optional<BBox> box;           // add/move
  std::optional<DamageGrade> grade;  // add
};

struct EditOutcome {
  RestorationJob job;
  bool conflict = false;  // base_version given and stale
};

// Parses {"boxes": [{"op": "add"|"move"|"delete", "index"?, "box"?, "grade"?}]}.
// Errors name the offending field, e.g. "boxes[1].box".
std::vector<BoxEdit> parse_box_edits(const nlohmann::json& body);
// Parses {"selections": [{"slot", "rank"? | "label"? | "text"?}]}.
std::vector<Selection> parse_selections(const nlohmann::json& body);

// Applies box edits to Stage 1 in order, recomputes reading order and
// masked text, marks Stage 1 overridden and Stages 2-3 pending. Prior
// candidate selections are discarded. Throws ValidationError (bad edit),
// ContractError (Stage 1 not available) or NotFoundError.
EditOutcome apply_box_edits(Engine& engine, const std::string& id, const std::vector<BoxEdit>& edits,
                            std::optional<std::uint64_t> base_version = std::nullopt);

// Applies candidate selections to Stage 2, marks it overridden and Stage 3
// pending. rank is 1-based over the stored ranking; label must appear in
// the stored Top-k; free text is taken verbatim.
EditOutcome apply_selections(Engine& engine, const std::string& id, const std::vector<Selection>& selections,
                             std::optional<std::uint64_t> base_version = std::nullopt);

}  // namespace docrestore::pipeline
