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


#include "docrestore/pipeline/pipeline.h"

#include <atomic>
#include <map>
#include <set>
#include <thread>

#include "docrestore/core/errors.h"

namespace docrestore::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void set_stage(RestorationJob& job, int n, StageStatus status, std::string error = {}) {
  auto& s = job.stage(n);
  s.status = status;
  s.error = std::move(error);
  s.updated_at = now_iso8601();
}

void remove_stage_files(JobStore& store, const std::string& id, int n) {
  store.remove(id, artifact::stage(n));
  if (n == 3) {
    store.remove(id, artifact::kRestored);
    store.remove(id, artifact::kContent);
  }
}

Stage1Artifact load_stage1(JobStore& store, const std::string& id) {
  auto j = store.read_json(id, artifact::stage(1));
  if (!j) throw ParseError(artifact::stage(1), "stage 1 artifact missing");
  return stage1_from_json(*j);
}

Stage2Artifact load_stage2(JobStore& store, const std::string& id) {
  auto j = store.read_json(id, artifact::stage(2));
  if (!j) throw ParseError(artifact::stage(2), "stage 2 artifact missing");
  return stage2_from_json(*j);
}

EditOutcome finish_edit(JobStore& store, RestorationJob& job, std::optional<std::uint64_t> base_version) {
  EditOutcome out;
  out.conflict = base_version && *base_version != job.version;
  ++job.version;
  store.save(job);
  out.job = job;
  return out;
}

}  // namespace

Engine::Engine(JobStore& store, const PipelineConfig& config)
    : Engine(store, config, nullptr) {}

Engine::Engine(JobStore& store, const PipelineConfig& config, std::shared_ptr<BackendProvider> backends)
    : store_(store), config_(config), atlas_(load_atlas(config.atlas)), backends_(std::move(backends)) {
  config_.validate();
  if (!backends_) backends_ = std::make_shared<DefaultBackendProvider>(config_, atlas_.labels());
}

void invalidate_from(JobStore& store, RestorationJob& job, int stage) {
  for (int n = stage; n <= kStageCount; ++n) set_stage(job, n, StageStatus::kPending);
  store.save(job);
  for (int n = stage; n <= kStageCount; ++n) remove_stage_files(store, job.id, n);
}

RestorationJob Engine::resume_job(const std::string& id) {
  std::lock_guard guard(store_.lock(id));
  return run_locked(id);
}

RestorationJob Engine::run_locked(const std::string& id) {
  RestorationJob job = store_.load(id);
  const Image page = store_.page_image(id);
  const AnnotationDoc input = store_.input_annotation(id);

  bool computed = false;
  for (int n = 1; n <= kStageCount; ++n) {
    if (is_settled(job.stage(n).status)) continue;
    if (!computed) {
      computed = true;
      ++job.version;
    }
    // Anything downstream of a recomputed stage is stale.
    for (int m = n + 1; m <= kStageCount; ++m) {
      set_stage(job, m, StageStatus::kPending);
      remove_stage_files(store_, id, m);
    }
    set_stage(job, n, StageStatus::kRunning);
    store_.save(job);
    try {
      if (n == 1) {
        auto ocr = backends_->ocr(input, job.seed);
        store_.write_json(id, artifact::stage(1), to_json(run_stage1(page, input, *ocr, config_)));
      } else if (n == 2) {
        const auto s1 = load_stage1(store_, id);
        auto ocr = backends_->ocr(input, job.seed);
        auto lm = backends_->lm(input, s1.page.reading_order, job.seed);
        store_.write_json(id, artifact::stage(2), to_json(run_stage2(page, s1, *ocr, *lm, config_)));
        job.selections.clear();
      } else {
        const auto s2 = load_stage2(store_, id);
        auto inpaint = backends_->inpaint();
        const auto s3 = run_stage3(page, s2, *inpaint, atlas_, config_);
        store_.write_json(id, artifact::stage(3), to_json(s3));
        if (s3.result.failure) {
          throw BackendError("step " + std::to_string(s3.result.failure->step) + ": " + s3.result.failure->message);
        }
        store_.write_image(id, artifact::kContent, s3.result.content);
        store_.write_image(id, artifact::kRestored, s3.result.restored);
      }
      set_stage(job, n, StageStatus::kDone);
      store_.save(job);
    } catch (const std::exception& e) {
      set_stage(job, n, StageStatus::kFailed, e.what());
      store_.save(job);
      break;
    }
  }
  return job;
}

std::vector<PageRun> run_pipeline(const PipelineConfig& config, const std::vector<PageInput>& pages,
                                  std::shared_ptr<BackendProvider> backends) {
  JobStore store(config.output_dir / "jobs");
  Engine engine(store, config, std::move(backends));

  // Ids are fixed up front so they do not depend on scheduling.
  std::vector<std::string> ids;
  std::set<std::string> taken;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    std::string id = pages[i].id.value_or(pages[i].image.stem().string());
    if (id.empty() || taken.count(id)) id = "page-" + std::to_string(i);
    taken.insert(id);
    ids.push_back(id);
  }

  std::vector<PageRun> runs(pages.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pages.size(); i = next++) {
      PageRun& run = runs[i];
      run.id = ids[i];
      try {
        const Image image = read_png(pages[i].image);
        AnnotationDoc input = read_annotation(pages[i].annotation);
        if (input.page.image.width != image.width() || input.page.image.height != image.height()) {
          throw ValidationError("image", "annotation dimensions differ from " + pages[i].image.string());
        }
        store.create(image, input, to_json(config), page_seed(config.seed, i), ids[i]);
        run.job = engine.resume_job(ids[i]);
        run.ok = true;
        for (const auto& s : run.job->stages) {
          if (!is_settled(s.status)) {
            run.ok = false;
            run.error = s.error;
          }
        }
      } catch (const std::exception& e) {
        run.ok = false;
        run.error = e.what();
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(config.workers, static_cast<int>(pages.size())));
  std::vector<std::jthread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  return runs;
}

std::vector<BoxEdit> parse_box_edits(const json& body) {
  if (!body.is_object() || !body.contains("boxes") || !body["boxes"].is_array()) {
    throw ValidationError("boxes", "expected an array of box edits");
  }
  std::vector<BoxEdit> out;
  const auto& arr = body["boxes"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string f = "boxes[" + std::to_string(i) + "]";
    const auto& e = arr[i];
    if (!e.is_object() || !e.contains("op") || !e["op"].is_string()) throw ValidationError(f + ".op", "missing op");
    BoxEdit edit;
    const auto op = e["op"].get<std::string>();
    if (op == "add") {
      edit.op = BoxEdit::Op::kAdd;
    } else if (op == "move") {
      edit.op = BoxEdit::Op::kMove;
    } else if (op == "delete") {
      edit.op = BoxEdit::Op::kDelete;
    } else {
      throw ValidationError(f + ".op", "unknown op '" + op + "'");
    }
    if (edit.op != BoxEdit::Op::kAdd) {
      if (!e.contains("index") || !e["index"].is_number_unsigned()) {
        throw ValidationError(f + ".index", "expected a non-negative integer");
      }
      edit.index = e["index"].get<std::size_t>();
    }
    if (edit.op != BoxEdit::Op::kDelete) {
      if (!e.contains("box")) throw ValidationError(f + ".box", "missing box");
      try {
        edit.box = box_from_json(e["box"], f + ".box");
      } catch (const ParseError& p) {
        throw ValidationError(p.field(), p.what());
      }
    }
    if (e.contains("grade") && !e["grade"].is_null()) {
      try {
        edit.grade = parse_damage_grade(e["grade"].get<std::string>());
      } catch (const std::exception&) {
        throw ValidationError(f + ".grade", "expected light, medium or severe");
      }
    }
    out.push_back(edit);
  }
  return out;
}

std::vector<Selection> parse_selections(const json& body) {
  if (!body.is_object() || !body.contains("selections") || !body["selections"].is_array()) {
    throw ValidationError("selections", "expected an array of selections");
  }
  std::vector<Selection> out;
  const auto& arr = body["selections"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string f = "selections[" + std::to_string(i) + "]";
    const auto& e = arr[i];
    if (!e.is_object() || !e.contains("slot") || !e["slot"].is_number_integer()) {
      throw ValidationError(f + ".slot", "expected an integer slot");
    }
    Selection s;
    s.slot = e["slot"].get<int>();
    const int forms = e.contains("rank") + e.contains("label") + e.contains("text");
    if (forms != 1) throw ValidationError(f, "give exactly one of rank, label or text");
    if (e.contains("rank")) {
      if (!e["rank"].is_number_integer()) throw ValidationError(f + ".rank", "expected an integer");
      s.rank = e["rank"].get<int>();
    } else if (e.contains("label")) {
      if (!e["label"].is_string()) throw ValidationError(f + ".label", "expected a string");
      s.label = e["label"].get<std::string>();
    } else {
      if (!e["text"].is_string() || e["text"].get<std::string>().empty()) {
        throw ValidationError(f + ".text", "expected a non-empty string");
      }
      s.label = e["text"].get<std::string>();
      s.free_text = true;
    }
    out.push_back(s);
  }
  return out;
}

EditOutcome apply_box_edits(Engine& engine, const std::string& id, const std::vector<BoxEdit>& edits,
                            std::optional<std::uint64_t> base_version) {
  JobStore& store = engine.store();
  std::lock_guard guard(store.lock(id));
  RestorationJob job = store.load(id);
  if (!is_settled(job.stage(1).status)) throw ContractError("stage 1 has not been computed");
  Stage1Artifact s1 = load_stage1(store, id);
  auto& boxes = s1.page.damage_boxes;

  for (std::size_t i = 0; i < edits.size(); ++i) {
    const std::string f = "boxes[" + std::to_string(i) + "]";
    const auto& e = edits[i];
    if (e.op != BoxEdit::Op::kAdd && (!e.index || *e.index >= boxes.size())) {
      throw ValidationError(f + ".index", "no damage box at this index");
    }
    if (e.op != BoxEdit::Op::kDelete) {
      if (!e.box || !is_well_formed(*e.box)) throw ValidationError(f + ".box", "box must have x_min < x_max, y_min < y_max, coords >= 0");
      if (!within_image(*e.box, job.page.width, job.page.height)) throw ValidationError(f + ".box", "box exceeds the page bounds");
    }
    switch (e.op) {
      case BoxEdit::Op::kAdd: boxes.push_back({*e.box, e.grade, std::nullopt}); break;
      case BoxEdit::Op::kMove:
        boxes[*e.index].box = *e.box;
        if (e.grade) boxes[*e.index].grade = e.grade;
        break;
      case BoxEdit::Op::kDelete: boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(*e.index)); break;
    }
  }
  derive_stage1(s1, engine.config());

  store.write_json(id, artifact::stage(1), to_json(s1));
  set_stage(job, 1, StageStatus::kOverridden);
  job.selections.clear();
  job.box_edits += edits.size();
  invalidate_from(store, job, 2);
  return finish_edit(store, job, base_version);
}

EditOutcome apply_selections(Engine& engine, const std::string& id, const std::vector<Selection>& selections,
                             std::optional<std::uint64_t> base_version) {
  JobStore& store = engine.store();
  std::lock_guard guard(store.lock(id));
  RestorationJob job = store.load(id);
  if (!is_settled(job.stage(2).status)) throw ContractError("stage 2 has not been computed");
  Stage2Artifact s2 = load_stage2(store, id);

  std::vector<Selection> resolved;
  for (std::size_t i = 0; i < selections.size(); ++i) {
    const std::string f = "selections[" + std::to_string(i) + "]";
    Selection sel = selections[i];
    SlotRecord* rec = s2.find(sel.slot);
    if (rec == nullptr) throw ValidationError(f + ".slot", "no slot " + std::to_string(sel.slot));
    const auto& ranked = rec->prediction.ranked;
    if (sel.rank) {
      if (*sel.rank < 1 || static_cast<std::size_t>(*sel.rank) > ranked.size()) {
        throw ValidationError(f + ".rank", "rank must be between 1 and " + std::to_string(ranked.size()));
      }
      sel.label = ranked[static_cast<std::size_t>(*sel.rank - 1)].label;
    } else if (!sel.free_text) {
      auto it = std::find_if(ranked.begin(), ranked.end(), [&](const auto& c) { return c.label == sel.label; });
      if (it == ranked.end()) throw ValidationError(f + ".label", "label is not among the stored candidates");
      sel.rank = static_cast<int>(it - ranked.begin()) + 1;
    }
    rec->prediction.label = sel.label;
    rec->source = PredictionSource::kHuman;
    rec->selection = sel;
    resolved.push_back(sel);
  }

  store.write_json(id, artifact::stage(2), to_json(s2));
  set_stage(job, 2, StageStatus::kOverridden);
  for (const auto& sel : resolved) {
    std::erase_if(job.selections, [&](const Selection& s) { return s.slot == sel.slot; });
    job.selections.push_back(sel);
  }
  invalidate_from(store, job, 3);
  return finish_edit(store, job, base_version);
}

}  // namespace docrestore::pipeline
