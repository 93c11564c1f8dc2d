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


#include "docrestore/pipeline/config.h"

#include <cstdlib>

#include "docrestore/core/annotation_io.h"
#include "docrestore/core/errors.h"
#include "docrestore/core/rng.h"

namespace docrestore::pipeline {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* key, const T& fallback, const std::string& path) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ParseError(path + "." + key, "wrong type");
  }
}

const json& object(const json& j, const char* key, const std::string& path) {
  static const json empty = json::object();
  if (!j.contains(key) || j[key].is_null()) return empty;
  if (!j[key].is_object()) throw ParseError(path + "." + key, "expected object");
  return j[key];
}

json profile_json(const adapters::GradeProfile& p) {
  return {{"top1_accuracy", p.top1_accuracy}, {"topk_inclusion", p.topk_inclusion},
          {"conf_lo", p.conf_lo},             {"conf_hi", p.conf_hi},
          {"uniform", p.uniform}};
}

adapters::GradeProfile profile_from(const json& j, adapters::GradeProfile p, const std::string& path) {
  p.top1_accuracy = field(j, "top1_accuracy", p.top1_accuracy, path);
  p.topk_inclusion = field(j, "topk_inclusion", p.topk_inclusion, path);
  p.conf_lo = field(j, "conf_lo", p.conf_lo, path);
  p.conf_hi = field(j, "conf_hi", p.conf_hi, path);
  p.uniform = field(j, "uniform", p.uniform, path);
  return p;
}

json remote_json(const adapters::RemoteConfig& r) {
  return {{"endpoint", r.endpoint},
          {"timeout_ms", r.timeout_ms},
          {"retries", r.retries},
          {"max_in_flight", r.max_in_flight},
          {"ocr_margin", r.ocr_margin}};
}

adapters::RemoteConfig remote_from(const json& j, adapters::RemoteConfig r, const std::string& path) {
  r.endpoint = field(j, "endpoint", r.endpoint, path);
  r.timeout_ms = field(j, "timeout_ms", r.timeout_ms, path);
  r.retries = field(j, "retries", r.retries, path);
  r.max_in_flight = field(j, "max_in_flight", r.max_in_flight, path);
  r.ocr_margin = field(j, "ocr_margin", r.ocr_margin, path);
  return r;
}

std::string_view to_string(adapters::InpaintMode mode) {
  switch (mode) {
    case adapters::InpaintMode::kBlend: return "blend";
    case adapters::InpaintMode::kIdentity: return "identity";
    case adapters::InpaintMode::kStamp: return "stamp";
  }
  return "blend";
}

adapters::InpaintMode parse_inpaint_mode(const std::string& text, const std::string& path) {
  if (text == "blend") return adapters::InpaintMode::kBlend;
  if (text == "identity") return adapters::InpaintMode::kIdentity;
  if (text == "stamp") return adapters::InpaintMode::kStamp;
  throw ParseError(path, "unknown inpaint mode '" + text + "'");
}

template <typename F>
auto rethrow_as_parse(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

}  // namespace

std::string_view to_string(BackendKind kind) { return kind == BackendKind::kStub ? "stub" : "remote"; }

BackendKind parse_backend_kind(std::string_view text) {
  if (text == "stub") return BackendKind::kStub;
  if (text == "remote") return BackendKind::kRemote;
  throw ContractError("unknown backend kind '" + std::string(text) + "'");
}

synthesis::DegradationRecipe default_recipe() {
  synthesis::DegradationRecipe r;
  r.kinds = {synthesis::DegradationKind::kCharMissing, synthesis::DegradationKind::kPaperDamage,
             synthesis::DegradationKind::kInkErosion};
  r.ink_erosion.blur_radius = {0, 1};
  r.ink_erosion.noise_density = {0, 0.002};
  return r;
}

PipelineConfig default_config() {
  PipelineConfig c;
  c.synthesis = default_recipe();
  c.toy.columns = 8;
  c.toy.chars_per_column = 10;
  return c;
}

void PipelineConfig::validate() const {
  auto wrap = [](const char* name, auto&& f) {
    try {
      f();
    } catch (const ContractError& e) {
      throw ContractError(std::string(name) + ": " + e.what());
    }
  };
  wrap("fusion", [&] { fusion.validate(); });
  wrap("vlcp", [&] { vlcp.validate(); });
  wrap("par", [&] { par.validate(); });
  wrap("synthesis", [&] { synthesis.validate(); });
  wrap("ocr.stub", [&] {
    adapters::StubOcrConfig s;
    s.clean = ocr.stub.clean;
    s.light = ocr.stub.light;
    s.medium = ocr.stub.medium;
    s.severe = ocr.stub.severe;
    s.match_iou = ocr.stub.match_iou;
    s.validate();
  });
  wrap("lm.stub", [&] {
    adapters::StubLmConfig s;
    s.top1_accuracy = lm.stub.top1_accuracy;
    s.top5_inclusion = lm.stub.top5_inclusion;
    s.hit_prob_lo = lm.stub.hit_prob_lo;
    s.hit_prob_hi = lm.stub.hit_prob_hi;
    s.validate();
  });
  if (ocr.kind == BackendKind::kRemote) wrap("ocr.remote", [&] { ocr.remote.validate(); });
  if (lm.kind == BackendKind::kRemote) wrap("lm.remote", [&] { lm.remote.validate(); });
  if (inpaint.kind == BackendKind::kRemote) wrap("inpaint.remote", [&] { inpaint.remote.validate(); });
  if (inpaint.stamp_value < 0 || inpaint.stamp_value > 255) throw ContractError("inpaint.stamp_value must be in [0,255]");
  if (!(legible_overlap_iou >= 0 && legible_overlap_iou <= 1)) throw ContractError("legible_overlap_iou must lie in [0,1]");
  if (!(detector.recall >= 0 && detector.recall <= 1)) throw ContractError("detector.recall must lie in [0,1]");
  if (!(detector.jitter >= 0)) throw ContractError("detector.jitter must be >= 0");
  if (atlas.cell_size < 4) throw ContractError("atlas.cell_size must be >= 4");
  if (toy.columns < 1 || toy.chars_per_column < 1 || toy.min_glyph < 4 || toy.max_glyph < toy.min_glyph ||
      toy.column_pitch < toy.max_glyph + 8 || toy.margin < 0) {
    throw ContractError("toy page spec is inconsistent");
  }
  if (!(evaluation.match_iou > 0 && evaluation.match_iou <= 1)) throw ContractError("evaluation.match_iou must lie in (0,1]");
  if (workers < 1) throw ContractError("workers must be >= 1");
}

json to_json(const PipelineConfig& c) {
  json j;
  j["ocr"] = {{"kind", to_string(c.ocr.kind)},
              {"stub",
               {{"clean", profile_json(c.ocr.stub.clean)},
                {"light", profile_json(c.ocr.stub.light)},
                {"medium", profile_json(c.ocr.stub.medium)},
                {"severe", profile_json(c.ocr.stub.severe)},
                {"match_iou", c.ocr.stub.match_iou}}},
              {"remote", remote_json(c.ocr.remote)}};
  j["lm"] = {{"kind", to_string(c.lm.kind)},
             {"stub",
              {{"top1_accuracy", c.lm.stub.top1_accuracy},
               {"top5_inclusion", c.lm.stub.top5_inclusion},
               {"hit_prob_lo", c.lm.stub.hit_prob_lo},
               {"hit_prob_hi", c.lm.stub.hit_prob_hi}}},
             {"remote", remote_json(c.lm.remote)}};
  j["inpaint"] = {{"kind", to_string(c.inpaint.kind)},
                  {"mode", to_string(c.inpaint.mode)},
                  {"stamp_value", c.inpaint.stamp_value},
                  {"remote", remote_json(c.inpaint.remote)}};
  j["fusion"] = {{"ocr_conf_threshold", c.fusion.ocr_conf_threshold}, {"iou_threshold", c.fusion.iou_threshold}};
  j["vlcp"] = {{"tau", c.vlcp.tau}, {"w_o", c.vlcp.w_o},     {"w_l", c.vlcp.w_l},
               {"alpha", c.vlcp.alpha}, {"beta", c.vlcp.beta}, {"k", c.vlcp.k}};
  j["par"] = {{"patch_size", c.par.patch_size}, {"stride", c.par.stride}};
  j["layout"] = localization::to_string(c.layout);
  j["legible_overlap_iou"] = c.legible_overlap_iou;
  j["synthesis"] = synthesis::to_json(c.synthesis);
  j["toy"] = {{"columns", c.toy.columns},         {"chars_per_column", c.toy.chars_per_column},
              {"min_glyph", c.toy.min_glyph},     {"max_glyph", c.toy.max_glyph},
              {"column_pitch", c.toy.column_pitch}, {"margin", c.toy.margin},
              {"alphabet", c.toy.alphabet}};
  j["detector"] = {{"recall", c.detector.recall}, {"jitter", c.detector.jitter}};
  j["atlas"] = {{"path", c.atlas.path ? json(c.atlas.path->string()) : json(nullptr)},
                {"cell_size", c.atlas.cell_size},
                {"seed", c.atlas.seed}};
  j["evaluation"] = {{"ink_threshold", c.evaluation.ocr.ink_threshold},
                     {"min_similarity", c.evaluation.ocr.min_similarity},
                     {"temperature", c.evaluation.ocr.temperature},
                     {"match_iou", c.evaluation.match_iou}};
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  return j;
}

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("config", "expected object");
  PipelineConfig c = default_config();

  const auto& ocr = object(j, "ocr", "config");
  c.ocr.kind = rethrow_as_parse("config.ocr.kind", [&] {
    return parse_backend_kind(field<std::string>(ocr, "kind", "stub", "config.ocr"));
  });
  const auto& ocr_stub = object(ocr, "stub", "config.ocr");
  c.ocr.stub.clean = profile_from(object(ocr_stub, "clean", "config.ocr.stub"), c.ocr.stub.clean, "config.ocr.stub.clean");
  c.ocr.stub.light = profile_from(object(ocr_stub, "light", "config.ocr.stub"), c.ocr.stub.light, "config.ocr.stub.light");
  c.ocr.stub.medium = profile_from(object(ocr_stub, "medium", "config.ocr.stub"), c.ocr.stub.medium, "config.ocr.stub.medium");
  c.ocr.stub.severe = profile_from(object(ocr_stub, "severe", "config.ocr.stub"), c.ocr.stub.severe, "config.ocr.stub.severe");
  c.ocr.stub.match_iou = field(ocr_stub, "match_iou", c.ocr.stub.match_iou, "config.ocr.stub");
  c.ocr.remote = remote_from(object(ocr, "remote", "config.ocr"), c.ocr.remote, "config.ocr.remote");

  const auto& lm = object(j, "lm", "config");
  c.lm.kind = rethrow_as_parse("config.lm.kind", [&] {
    return parse_backend_kind(field<std::string>(lm, "kind", "stub", "config.lm"));
  });
  const auto& lm_stub = object(lm, "stub", "config.lm");
  c.lm.stub.top1_accuracy = field(lm_stub, "top1_accuracy", c.lm.stub.top1_accuracy, "config.lm.stub");
  c.lm.stub.top5_inclusion = field(lm_stub, "top5_inclusion", c.lm.stub.top5_inclusion, "config.lm.stub");
  c.lm.stub.hit_prob_lo = field(lm_stub, "hit_prob_lo", c.lm.stub.hit_prob_lo, "config.lm.stub");
  c.lm.stub.hit_prob_hi = field(lm_stub, "hit_prob_hi", c.lm.stub.hit_prob_hi, "config.lm.stub");
  c.lm.remote = remote_from(object(lm, "remote", "config.lm"), c.lm.remote, "config.lm.remote");

  const auto& inp = object(j, "inpaint", "config");
  c.inpaint.kind = rethrow_as_parse("config.inpaint.kind", [&] {
    return parse_backend_kind(field<std::string>(inp, "kind", "stub", "config.inpaint"));
  });
  c.inpaint.mode = parse_inpaint_mode(field<std::string>(inp, "mode", "blend", "config.inpaint"), "config.inpaint.mode");
  c.inpaint.stamp_value = field(inp, "stamp_value", c.inpaint.stamp_value, "config.inpaint");
  c.inpaint.remote = remote_from(object(inp, "remote", "config.inpaint"), c.inpaint.remote, "config.inpaint.remote");

  const auto& fu = object(j, "fusion", "config");
  c.fusion.ocr_conf_threshold = field(fu, "ocr_conf_threshold", c.fusion.ocr_conf_threshold, "config.fusion");
  c.fusion.iou_threshold = field(fu, "iou_threshold", c.fusion.iou_threshold, "config.fusion");

  const auto& v = object(j, "vlcp", "config");
  c.vlcp.tau = field(v, "tau", c.vlcp.tau, "config.vlcp");
  c.vlcp.w_o = field(v, "w_o", c.vlcp.w_o, "config.vlcp");
  c.vlcp.w_l = field(v, "w_l", c.vlcp.w_l, "config.vlcp");
  c.vlcp.alpha = field(v, "alpha", c.vlcp.alpha, "config.vlcp");
  c.vlcp.beta = field(v, "beta", c.vlcp.beta, "config.vlcp");
  c.vlcp.k = field(v, "k", c.vlcp.k, "config.vlcp");

  const auto& par = object(j, "par", "config");
  c.par.patch_size = field(par, "patch_size", c.par.patch_size, "config.par");
  c.par.stride = field(par, "stride", c.par.stride, "config.par");

  c.layout = rethrow_as_parse("config.layout", [&] {
    return localization::parse_layout(field<std::string>(j, "layout", "vertical-rtl", "config"));
  });
  c.legible_overlap_iou = field(j, "legible_overlap_iou", c.legible_overlap_iou, "config");
  if (j.contains("synthesis") && !j["synthesis"].is_null()) {
    c.synthesis = rethrow_as_parse("config.synthesis", [&] { return synthesis::recipe_from_json(j["synthesis"]); });
  }

  const auto& toy = object(j, "toy", "config");
  c.toy.columns = field(toy, "columns", c.toy.columns, "config.toy");
  c.toy.chars_per_column = field(toy, "chars_per_column", c.toy.chars_per_column, "config.toy");
  c.toy.min_glyph = field(toy, "min_glyph", c.toy.min_glyph, "config.toy");
  c.toy.max_glyph = field(toy, "max_glyph", c.toy.max_glyph, "config.toy");
  c.toy.column_pitch = field(toy, "column_pitch", c.toy.column_pitch, "config.toy");
  c.toy.margin = field(toy, "margin", c.toy.margin, "config.toy");
  c.toy.alphabet = field(toy, "alphabet", c.toy.alphabet, "config.toy");

  const auto& det = object(j, "detector", "config");
  c.detector.recall = field(det, "recall", c.detector.recall, "config.detector");
  c.detector.jitter = field(det, "jitter", c.detector.jitter, "config.detector");

  const auto& at = object(j, "atlas", "config");
  if (at.contains("path") && !at["path"].is_null()) c.atlas.path = field<std::string>(at, "path", "", "config.atlas");
  c.atlas.cell_size = field(at, "cell_size", c.atlas.cell_size, "config.atlas");
  c.atlas.seed = field(at, "seed", c.atlas.seed, "config.atlas");

  const auto& ev = object(j, "evaluation", "config");
  c.evaluation.ocr.ink_threshold = field(ev, "ink_threshold", c.evaluation.ocr.ink_threshold, "config.evaluation");
  c.evaluation.ocr.min_similarity = field(ev, "min_similarity", c.evaluation.ocr.min_similarity, "config.evaluation");
  c.evaluation.ocr.temperature = field(ev, "temperature", c.evaluation.ocr.temperature, "config.evaluation");
  c.evaluation.match_iou = field(ev, "match_iou", c.evaluation.match_iou, "config.evaluation");

  c.output_dir = field<std::string>(j, "output_dir", c.output_dir.string(), "config");
  c.seed = field(j, "seed", c.seed, "config");
  c.workers = field(j, "workers", c.workers, "config");

  rethrow_as_parse("config", [&] {
    c.validate();
    return 0;
  });
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string(), e.what());
  }
  return config_from_json(j);
}

void apply_env_overrides(PipelineConfig& config) {
  auto apply = [](const char* name, adapters::RemoteConfig& remote) {
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0') remote.endpoint = v;
  };
  apply("DOCRESTORE_OCR_ENDPOINT", config.ocr.remote);
  apply("DOCRESTORE_LM_ENDPOINT", config.lm.remote);
  apply("DOCRESTORE_INPAINT_ENDPOINT", config.inpaint.remote);
}

GlyphAtlas load_atlas(const AtlasConfig& config) {
  if (config.path) return GlyphAtlas::load(*config.path);
  const auto alphabet = default_alphabet();
  return GlyphAtlas::procedural(alphabet, config.cell_size, config.seed);
}

std::uint64_t page_seed(std::uint64_t root, std::size_t page_index) {
  return mix_seed(root, static_cast<std::uint64_t>(page_index));
}

}  // namespace docrestore::pipeline
