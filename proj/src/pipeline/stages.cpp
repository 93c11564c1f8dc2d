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


#include "docrestore/pipeline/stages.h"

#include "docrestore/core/errors.h"

namespace docrestore::pipeline {

using nlohmann::json;

namespace {

json candidates_json(const std::vector<Candidate>& candidates) {
  json arr = json::array();
  for (const auto& c : candidates) arr.push_back({c.label, c.prob});
  return arr;
}

std::vector<Candidate> candidates_from(const json& j) {
  std::vector<Candidate> out;
  for (const auto& e : j) out.push_back({e.at(0).get<std::string>(), e.at(1).get<double>()});
  return out;
}

json damage_box_json(const DamageBox& d) {
  json j = {{"box", to_json(d.box)}};
  if (d.grade) j["grade"] = to_string(*d.grade);
  return j;
}

DamageBox damage_box_from(const json& j, const std::string& field) {
  DamageBox d{box_from_json(j.at("box"), field + ".box"), std::nullopt, std::nullopt};
  if (j.contains("grade")) d.grade = parse_damage_grade(j["grade"].get<std::string>());
  return d;
}

json scored_json(const prediction::ScoredCandidate& s) {
  return {{"label", s.label}, {"p_o", s.p_o},   {"p_l", s.p_l},
          {"r_o", s.r_o},     {"r_l", s.r_l},   {"base", s.base},
          {"rank_score", s.rank_score}, {"bonus_applied", s.bonus_applied}, {"composite", s.composite}};
}

prediction::ScoredCandidate scored_from(const json& j) {
  prediction::ScoredCandidate s;
  s.label = j.at("label").get<std::string>();
  s.p_o = j.at("p_o").get<double>();
  s.p_l = j.at("p_l").get<double>();
  s.r_o = j.at("r_o").get<int>();
  s.r_l = j.at("r_l").get<int>();
  s.base = j.at("base").get<double>();
  s.rank_score = j.at("rank_score").get<double>();
  s.bonus_applied = j.at("bonus_applied").get<bool>();
  s.composite = j.at("composite").get<double>();
  return s;
}

}  // namespace

void derive_stage1(Stage1Artifact& a, const PipelineConfig& config) {
  a.legible.clear();
  a.page.chars.clear();
  for (std::size_t i = 0; i < a.observations.size(); ++i) {
    const auto& obs = a.observations[i];
    if (obs.candidates().empty() || obs.confidence() < config.fusion.ocr_conf_threshold) continue;
    bool damaged = false;
    for (const auto& d : a.page.damage_boxes) {
      if (iou(obs.box(), d.box) > config.legible_overlap_iou) {
        damaged = true;
        break;
      }
    }
    if (damaged) continue;
    a.legible.push_back(i);
    a.page.chars.push_back(obs);
  }
  a.page.lines.clear();
  a.page.reading_order = localization::reading_order(a.page, config.layout);
  a.masked = localization::build_masked_text(a.page.reading_order, a.page.chars);
}

Stage1Artifact run_stage1(const Image& page, const AnnotationDoc& input, OcrBackend& ocr,
                          const PipelineConfig& config) {
  config.fusion.validate();
  Stage1Artifact a;
  a.page.image = input.page.image;
  for (const auto& c : input.page.chars) {
    if (!c.candidates().empty()) {
      a.observations.push_back(c);
      continue;
    }
    auto candidates = ocr.recognize(page, c.box(), config.vlcp.k);
    a.observations.emplace_back(c.box(), std::move(candidates), ObservationSource::kOcr, config.vlcp.k);
  }
  for (const auto& d : input.page.damage_boxes) a.detected.push_back({d.box, d.grade, std::nullopt});

  a.ambiguous = localization::collect_ambiguous(a.observations, config.fusion);
  std::vector<BBox> detected_boxes;
  for (const auto& d : a.detected) detected_boxes.push_back(d.box);
  const auto fused = localization::fuse(a.ambiguous, detected_boxes, config.fusion);
  for (const auto& box : fused) {
    DamageBox d{box, std::nullopt, std::nullopt};
    for (const auto& s : a.detected) {
      if (s.box == box) {
        d.grade = s.grade;
        break;
      }
    }
    a.page.damage_boxes.push_back(d);
  }
  derive_stage1(a, config);
  return a;
}

json to_json(const Stage1Artifact& a) {
  json observations = json::array();
  for (const auto& o : a.observations) {
    observations.push_back({{"box", to_json(o.box())},
                            {"candidates", candidates_json(o.candidates())},
                            {"source", to_string(o.source())}});
  }
  json detected = json::array();
  for (const auto& d : a.detected) detected.push_back(damage_box_json(d));
  json ambiguous = json::array();
  for (const auto& b : a.ambiguous) ambiguous.push_back(to_json(b));
  json slots = json::array();
  for (const auto& s : a.masked.slots) {
    slots.push_back({{"slot", s.slot}, {"damage_index", s.damage_index}, {"position", s.position}, {"box", to_json(s.box)}});
  }
  return {{"schema_version", kJobSchemaVersion},
          {"observations", observations},
          {"detected", detected},
          {"ambiguous", ambiguous},
          {"page", to_json(make_annotation(a.page))},
          {"legible", a.legible},
          {"masked", {{"context", a.masked.context()}, {"slot_count", a.masked.slot_count()}, {"slots", slots}}}};
}

Stage1Artifact stage1_from_json(const json& j) {
  Stage1Artifact a;
  try {
    std::size_t i = 0;
    for (const auto& o : j.at("observations")) {
      const std::string f = "observations[" + std::to_string(i++) + "]";
      a.observations.emplace_back(box_from_json(o.at("box"), f + ".box"), candidates_from(o.at("candidates")),
                                  parse_observation_source(o.at("source").get<std::string>()));
    }
    i = 0;
    for (const auto& d : j.at("detected")) a.detected.push_back(damage_box_from(d, "detected[" + std::to_string(i++) + "]"));
    i = 0;
    for (const auto& b : j.at("ambiguous")) a.ambiguous.push_back(box_from_json(b, "ambiguous[" + std::to_string(i++) + "]"));
    a.page = annotation_from_json(j.at("page")).page;
    a.legible = j.at("legible").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw ParseError("stage1", e.what());
  }
  a.masked = localization::build_masked_text(a.page.reading_order, a.page.chars);
  return a;
}

std::string_view to_string(PredictionSource source) {
  return source == PredictionSource::kVlcp ? "vlcp" : "human";
}

const SlotRecord* Stage2Artifact::find(int slot) const {
  for (const auto& s : slots) {
    if (s.prediction.slot == slot) return &s;
  }
  return nullptr;
}

SlotRecord* Stage2Artifact::find(int slot) {
  return const_cast<SlotRecord*>(static_cast<const Stage2Artifact*>(this)->find(slot));
}

Stage2Artifact run_stage2(const Image& page, const Stage1Artifact& stage1, OcrBackend& ocr, LmBackend& lm,
                          const PipelineConfig& config) {
  auto result = prediction::vlcp_predict(stage1.masked, page, ocr, lm, config.vlcp);
  Stage2Artifact a;
  a.lm_calls = result.lm_calls;
  for (auto& p : result.slots) a.slots.push_back({std::move(p), PredictionSource::kVlcp, std::nullopt});
  return a;
}

json to_json(const Stage2Artifact& a) {
  json slots = json::array();
  for (const auto& r : a.slots) {
    const auto& p = r.prediction;
    json ranked = json::array();
    for (const auto& s : p.ranked) ranked.push_back(scored_json(s));
    json e = {{"slot", p.slot},
              {"box", to_json(p.box)},
              {"route", prediction::to_string(p.route)},
              {"label", p.label ? json(*p.label) : json(nullptr)},
              {"source", to_string(r.source)},
              {"ocr_candidates", candidates_json(p.ocr_candidates)},
              {"lm_candidates", candidates_json(p.lm_candidates)},
              {"ranked", ranked},
              {"error", p.error}};
    if (r.selection) {
      json sel = {{"label", r.selection->label}, {"free_text", r.selection->free_text}};
      if (r.selection->rank) sel["rank"] = *r.selection->rank;
      e["selection"] = sel;
    }
    slots.push_back(e);
  }
  return {{"schema_version", kJobSchemaVersion}, {"lm_calls", a.lm_calls}, {"slot_count", a.slots.size()}, {"slots", slots}};
}

Stage2Artifact stage2_from_json(const json& j) {
  Stage2Artifact a;
  try {
    a.lm_calls = j.at("lm_calls").get<int>();
    std::size_t i = 0;
    for (const auto& e : j.at("slots")) {
      SlotRecord r;
      auto& p = r.prediction;
      p.slot = e.at("slot").get<int>();
      p.box = box_from_json(e.at("box"), "slots[" + std::to_string(i++) + "].box");
      p.route = prediction::parse_slot_route(e.at("route").get<std::string>());
      if (!e.at("label").is_null()) p.label = e["label"].get<std::string>();
      r.source = e.at("source").get<std::string>() == "human" ? PredictionSource::kHuman : PredictionSource::kVlcp;
      p.ocr_candidates = candidates_from(e.at("ocr_candidates"));
      p.lm_candidates = candidates_from(e.at("lm_candidates"));
      for (const auto& s : e.at("ranked")) p.ranked.push_back(scored_from(s));
      p.error = e.value("error", "");
      if (e.contains("selection")) {
        const auto& s = e["selection"];
        Selection sel{p.slot, s.at("label").get<std::string>(), std::nullopt, s.value("free_text", false)};
        if (s.contains("rank")) sel.rank = s["rank"].get<int>();
        r.selection = sel;
      }
      a.slots.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError("stage2", e.what());
  }
  return a;
}

Stage3Artifact run_stage3(const Image& page, const Stage2Artifact& stage2, InpaintBackend& inpaint,
                          const GlyphAtlas& atlas, const PipelineConfig& config) {
  Stage3Artifact a;
  for (const auto& r : stage2.slots) {
    if (!r.prediction.label) {
      a.skipped_slots.push_back(r.prediction.slot);
      continue;
    }
    a.targets.push_back({r.prediction.box, *r.prediction.label});
    a.target_slots.push_back(r.prediction.slot);
  }
  a.result = restoration::restore_page(page, a.targets, inpaint, atlas, config.par);
  return a;
}

json to_json(const Stage3Artifact& a) {
  std::vector<BBox> boxes;
  json targets = json::array();
  for (std::size_t i = 0; i < a.targets.size(); ++i) {
    boxes.push_back(a.targets[i].box);
    targets.push_back({{"slot", a.target_slots[i]}, {"box", to_json(a.targets[i].box)}, {"label", a.targets[i].label}});
  }
  json failure = nullptr;
  if (a.result.failure) failure = {{"step", a.result.failure->step}, {"message", a.result.failure->message}};
  return {{"schema_version", kJobSchemaVersion},
          {"targets", targets},
          {"skipped_slots", a.skipped_slots},
          {"plan", restoration::plan_to_json(a.result.plan, boxes)},
          {"steps_executed", a.result.steps_executed},
          {"warnings", a.result.warnings},
          {"failure", failure}};
}

}  // namespace docrestore::pipeline
