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


#include "docrestore/pipeline/job.h"

#include <chrono>
#include <ctime>
#include <regex>

#include "docrestore/core/errors.h"

namespace docrestore::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(StageStatus status) {
  switch (status) {
    case StageStatus::kPending: return "pending";
    case StageStatus::kRunning: return "running";
    case StageStatus::kDone: return "done";
    case StageStatus::kFailed: return "failed";
    case StageStatus::kOverridden: return "overridden";
  }
  return "pending";
}

StageStatus parse_stage_status(std::string_view text) {
  for (auto s : {StageStatus::kPending, StageStatus::kRunning, StageStatus::kDone, StageStatus::kFailed,
                 StageStatus::kOverridden}) {
    if (to_string(s) == text) return s;
  }
  throw ContractError("unknown stage status '" + std::string(text) + "'");
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string artifact::stage(int n) { return "stage" + std::to_string(n) + ".json"; }

json to_json(const RestorationJob& job) {
  json stages = json::array();
  for (const auto& s : job.stages) {
    stages.push_back({{"status", to_string(s.status)}, {"error", s.error}, {"updated_at", s.updated_at}});
  }
  json selections = json::array();
  for (const auto& s : job.selections) {
    json e = {{"slot", s.slot}, {"label", s.label}, {"free_text", s.free_text}};
    if (s.rank) e["rank"] = *s.rank;
    selections.push_back(e);
  }
  return {{"schema_version", kJobSchemaVersion},
          {"id", job.id},
          {"page", {{"path", job.page.path}, {"width", job.page.width}, {"height", job.page.height}}},
          {"seed", job.seed},
          {"version", job.version},
          {"stages", stages},
          {"selections", selections},
          {"box_edits", job.box_edits},
          {"config", job.config},
          {"created_at", job.created_at},
          {"updated_at", job.updated_at}};
}

RestorationJob job_from_json(const json& j) {
  RestorationJob job;
  try {
    if (j.at("schema_version").get<int>() != kJobSchemaVersion) {
      throw ParseError("schema_version", "unsupported job schema version");
    }
    job.id = j.at("id").get<std::string>();
    const auto& p = j.at("page");
    job.page = {p.at("path").get<std::string>(), p.at("width").get<int>(), p.at("height").get<int>()};
    job.seed = j.at("seed").get<std::uint64_t>();
    job.version = j.at("version").get<std::uint64_t>();
    const auto& stages = j.at("stages");
    if (!stages.is_array() || stages.size() != kStageCount) throw ParseError("stages", "expected 3 entries");
    for (std::size_t i = 0; i < kStageCount; ++i) {
      job.stages[i].status = parse_stage_status(stages[i].at("status").get<std::string>());
      job.stages[i].error = stages[i].value("error", "");
      job.stages[i].updated_at = stages[i].value("updated_at", "");
    }
    for (const auto& s : j.at("selections")) {
      Selection sel{s.at("slot").get<int>(), s.at("label").get<std::string>(), std::nullopt,
                    s.value("free_text", false)};
      if (s.contains("rank")) sel.rank = s["rank"].get<int>();
      job.selections.push_back(sel);
    }
    job.box_edits = j.value("box_edits", std::size_t{0});
    job.config = j.at("config");
    job.created_at = j.value("created_at", "");
    job.updated_at = j.value("updated_at", "");
  } catch (const json::exception& e) {
    throw ParseError("job", e.what());
  } catch (const ContractError& e) {
    throw ParseError("job", e.what());
  }
  return job;
}

JobStore::JobStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

void JobStore::check_id(const std::string& id) {
  static const std::regex valid(R"([A-Za-z0-9][A-Za-z0-9._-]{0,127})");
  if (!std::regex_match(id, valid) || id.find("..") != std::string::npos) {
    throw NotFoundError("invalid job id '" + id + "'");
  }
}

fs::path JobStore::dir(const std::string& id) const {
  check_id(id);
  return root_ / id;
}

bool JobStore::exists(const std::string& id) const {
  try {
    return fs::exists(dir(id) / artifact::kJob);
  } catch (const NotFoundError&) {
    return false;
  }
}

RestorationJob JobStore::create(const Image& page, const AnnotationDoc& input, const json& config,
                                std::uint64_t seed, std::optional<std::string> id) {
  std::lock_guard guard(create_guard_);
  if (!id) {
    std::size_t next = 1;
    for (const auto& existing : list()) {
      if (existing.rfind("job-", 0) == 0) {
        try {
          next = std::max<std::size_t>(next, std::stoul(existing.substr(4)) + 1);
        } catch (const std::exception&) {
        }
      }
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "job-%06zu", next);
    id = buf;
  }
  const fs::path d = dir(*id);
  if (fs::exists(d)) fs::remove_all(d);
  fs::create_directories(d);

  RestorationJob job;
  job.id = *id;
  job.page = {artifact::kPage, page.width(), page.height()};
  job.seed = seed;
  job.config = config;
  job.created_at = now_iso8601();
  AnnotationDoc stored = input;
  stored.page.image = job.page;
  write_image(job.id, artifact::kPage, page);
  write_annotation(stored, d / artifact::kInput);
  save(job);
  return job;
}

RestorationJob JobStore::load(const std::string& id) const {
  const fs::path path = dir(id) / artifact::kJob;
  if (!fs::exists(path)) throw NotFoundError("job '" + id + "' not found");
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string(), e.what());
  }
  return job_from_json(j);
}

void JobStore::save(RestorationJob& job) const {
  job.updated_at = now_iso8601();
  write_file_atomic(dir(job.id) / artifact::kJob, to_json(job).dump(2));
}

std::vector<std::string> JobStore::list() const {
  std::vector<std::string> ids;
  if (!fs::exists(root_)) return ids;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (entry.is_directory() && fs::exists(entry.path() / artifact::kJob)) {
      ids.push_back(entry.path().filename().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::mutex& JobStore::lock(const std::string& id) {
  std::lock_guard guard(locks_guard_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::optional<json> JobStore::read_json(const std::string& id, const std::string& name) const {
  const fs::path path = dir(id) / name;
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    return std::nullopt;
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(path.string(), e.what());
  }
}

void JobStore::write_json(const std::string& id, const std::string& name, const json& value) const {
  write_file_atomic(dir(id) / name, value.dump(2));
}

std::optional<Image> JobStore::read_image(const std::string& id, const std::string& name) const {
  const fs::path path = dir(id) / name;
  if (!fs::exists(path)) return std::nullopt;
  return read_png(path);
}

void JobStore::write_image(const std::string& id, const std::string& name, const Image& image) const {
  write_png(image, dir(id) / name);
}

void JobStore::remove(const std::string& id, const std::string& name) const {
  std::error_code ec;
  fs::remove(dir(id) / name, ec);
}

Image JobStore::page_image(const std::string& id) const {
  auto img = read_image(id, artifact::kPage);
  if (!img) throw ParseError((dir(id) / artifact::kPage).string(), "page image missing");
  return *img;
}

AnnotationDoc JobStore::input_annotation(const std::string& id) const {
  return read_annotation(dir(id) / artifact::kInput);
}

}  // namespace docrestore::pipeline
