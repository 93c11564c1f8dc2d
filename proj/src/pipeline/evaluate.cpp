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


#include "docrestore/pipeline/evaluate.h"

#include <cstdio>
#include <sstream>

#include "docrestore/adapters/stubs.h"
#include "docrestore/core/errors.h"
#include "docrestore/pipeline/stages.h"

namespace docrestore::pipeline {

using nlohmann::json;

namespace {

void pool(std::optional<metrics::ArResult>& into, const std::optional<metrics::ArResult>& r) {
  if (!r) return;
  if (into) {
    *into += *r;
  } else {
    into = r;
  }
}

std::optional<metrics::ArResult> score(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  if (ref.empty()) return std::nullopt;
  return metrics::ar(ref, hyp);
}

json ar_json(const std::optional<metrics::ArResult>& r) {
  if (!r) return nullptr;
  return {{"ar", r->ar}, {"n_t", r->n_t}, {"deletions", r->deletions},
          {"substitutions", r->substitutions}, {"insertions", r->insertions}};
}

std::string pct(const std::optional<metrics::ArResult>& r) {
  if (!r) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * r->ar);
  return buf;
}

}  // namespace

EvalReport evaluate(const PipelineConfig& config, const JobStore& store, const std::vector<EvalPage>& pages) {
  adapters::TemplateOcr reader(load_atlas(config.atlas), config.evaluation.ocr);
  EvalReport report;
  std::vector<std::vector<std::string>> slot_candidates;
  std::vector<std::string> slot_truth;

  for (const auto& page : pages) {
    const RestorationJob job = store.load(page.job_id);
    const AnnotationDoc gt = read_annotation(page.ground_truth);
    const Image damaged = store.page_image(page.job_id);
    if (gt.page.image.width != damaged.width() || gt.page.image.height != damaged.height()) {
      throw ValidationError(page.job_id, "ground truth " + page.ground_truth.string() + " does not match the page size");
    }
    const auto restored_img = store.read_image(page.job_id, artifact::kRestored);
    const Image& restored = restored_img ? *restored_img : damaged;

    PageReport pr;
    pr.job_id = page.job_id;
    pr.restored = restored_img.has_value();

    // gt chars in reading order; fall back to annotation order.
    std::vector<std::size_t> order;
    for (const auto& pos : gt.page.reading_order) {
      if (pos.kind == SlotKind::kLegible) order.push_back(pos.index);
    }
    if (order.empty()) {
      for (std::size_t i = 0; i < gt.page.chars.size(); ++i) order.push_back(i);
    }
    std::map<std::string, std::vector<std::string>> ref, hyp_d, hyp_r;
    for (std::size_t i : order) {
      const CharTruth t = i < gt.char_truth.size() ? gt.char_truth[i] : CharTruth{};
      if (!t.gt_label) continue;
      const BBox& box = gt.page.chars[i].box();
      const std::string bucket = t.grade ? std::string(to_string(*t.grade)) : "undamaged";
      const auto d = reader.read(damaged, box);
      const auto r = reader.read(restored, box);
      for (const std::string& b : {bucket, std::string("all")}) {
        ref[b].push_back(*t.gt_label);
        if (d) hyp_d[b].push_back(*d);
        if (r) hyp_r[b].push_back(*r);
      }
    }
    for (const auto& b : ar_buckets()) {
      pr.ar[b] = {score(ref[b], hyp_d[b]), score(ref[b], hyp_r[b])};
      pool(report.ar[b].damaged, pr.ar[b].damaged);
      pool(report.ar[b].restored, pr.ar[b].restored);
    }

    if (auto s2 = store.read_json(page.job_id, artifact::stage(2)); s2 && is_settled(job.stage(2).status)) {
      const auto art = stage2_from_json(*s2);
      pr.slots = art.slots.size();
      for (const auto& rec : art.slots) {
        std::optional<std::string> truth;
        double best = config.evaluation.match_iou;
        for (std::size_t i = 0; i < gt.page.chars.size(); ++i) {
          if (i >= gt.char_truth.size() || !gt.char_truth[i].gt_label) continue;
          const double v = iou(gt.page.chars[i].box(), rec.prediction.box);
          if (v >= best && (!truth || v > best)) {
            best = v;
            truth = gt.char_truth[i].gt_label;
          }
        }
        if (!truth) continue;
        std::vector<std::string> labels;
        if (rec.prediction.label) labels.push_back(*rec.prediction.label);
        for (const auto& c : rec.prediction.ranked) {
          if (!rec.prediction.label || c.label != *rec.prediction.label) labels.push_back(c.label);
        }
        slot_candidates.push_back(std::move(labels));
        slot_truth.push_back(*truth);
      }
    }

    if (auto s1 = store.read_json(page.job_id, artifact::stage(1)); s1 && is_settled(job.stage(1).status)) {
      const auto art = stage1_from_json(*s1);
      std::vector<metrics::ScoredBox> preds;
      for (const auto& d : art.page.damage_boxes) preds.push_back({d.box, 1.0});
      std::vector<BBox> truth;
      for (const auto& d : gt.page.damage_boxes) truth.push_back(d.box);
      const auto det = metrics::detection_prf(preds, truth, 0.5);
      report.predicted_boxes += preds.size();
      report.truth_boxes += truth.size();
      report.matched_boxes += det.matches.size();
    }
    report.pages.push_back(std::move(pr));
  }

  report.scored_slots = slot_truth.size();
  if (!slot_truth.empty()) {
    report.top1 = metrics::topk_accuracy(slot_candidates, slot_truth, 1);
    report.top5 = metrics::topk_accuracy(slot_candidates, slot_truth, 5);
  }
  auto& det = report.detection;
  det.precision = report.predicted_boxes ? static_cast<double>(report.matched_boxes) / report.predicted_boxes : 0.0;
  det.recall = report.truth_boxes ? static_cast<double>(report.matched_boxes) / report.truth_boxes : 0.0;
  det.f1 = det.precision + det.recall > 0 ? 2 * det.precision * det.recall / (det.precision + det.recall) : 0.0;
  return report;
}

json to_json(const EvalReport& report) {
  json ar = json::object();
  for (const auto& b : ar_buckets()) {
    const auto it = report.ar.find(b);
    const BucketAr v = it == report.ar.end() ? BucketAr{} : it->second;
    ar[b] = {{"damaged", ar_json(v.damaged)}, {"restored", ar_json(v.restored)}};
  }
  json pages = json::array();
  for (const auto& p : report.pages) {
    json par = json::object();
    for (const auto& [b, v] : p.ar) par[b] = {{"damaged", ar_json(v.damaged)}, {"restored", ar_json(v.restored)}};
    pages.push_back({{"job_id", p.job_id}, {"slots", p.slots}, {"restored", p.restored}, {"ar", par}});
  }
  return {{"ar", ar},
          {"top1", report.top1 ? json(*report.top1) : json(nullptr)},
          {"top5", report.top5 ? json(*report.top5) : json(nullptr)},
          {"scored_slots", report.scored_slots},
          {"detection",
           {{"precision", report.detection.precision},
            {"recall", report.detection.recall},
            {"f1", report.detection.f1},
            {"predicted", report.predicted_boxes},
            {"truth", report.truth_boxes},
            {"matched", report.matched_boxes}}},
          {"pages", pages}};
}

std::string format_table(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %10s %10s %10s %10s %10s\n", "AR (%)", "light", "medium", "severe",
                "undamaged", "all");
  out << line;
  for (const bool restored : {false, true}) {
    std::vector<std::string> cells;
    for (const auto& b : ar_buckets()) {
      const auto it = report.ar.find(b);
      cells.push_back(it == report.ar.end() ? "-" : pct(restored ? it->second.restored : it->second.damaged));
    }
    std::snprintf(line, sizeof line, "%-10s %10s %10s %10s %10s %10s\n", restored ? "restored" : "damaged",
                  cells[0].c_str(), cells[1].c_str(), cells[2].c_str(), cells[3].c_str(), cells[4].c_str());
    out << line;
  }
  auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * *v);
    return std::string(buf);
  };
  out << "prediction  top-1 " << opt(report.top1) << "  top-5 " << opt(report.top5) << "  ("
      << report.scored_slots << " slots)\n";
  std::snprintf(line, sizeof line, "detection   P %.4f  R %.4f  F1 %.4f  (%zu pred, %zu gt)\n",
                report.detection.precision, report.detection.recall, report.detection.f1, report.predicted_boxes,
                report.truth_boxes);
  out << line;
  return out.str();
}

}  // namespace docrestore::pipeline
