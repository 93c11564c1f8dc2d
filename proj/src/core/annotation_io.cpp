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


#include "docrestore/core/annotation_io.h"

#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "docrestore/core/errors.h"

namespace docrestore {

using nlohmann::json;

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDegenerateBox: return "degenerate-box";
    case ViolationKind::kNegativeCoordinate: return "negative-coordinate";
    case ViolationKind::kOutOfBounds: return "out-of-bounds";
    case ViolationKind::kUnsortedCandidates: return "unsorted-candidates";
    case ViolationKind::kDuplicateLabel: return "duplicate-label";
    case ViolationKind::kProbabilityRange: return "probability-range";
    case ViolationKind::kBadReference: return "bad-reference";
    case ViolationKind::kDuplicateReference: return "duplicate-reference";
    case ViolationKind::kBadImage: return "bad-image";
  }
  return "unknown";
}

namespace {

void check_box(const BBox& b, const ImageRef& image, const std::string& field,
               std::vector<Violation>& out) {
  if (b.x_min < 0 || b.y_min < 0 || b.x_max < 0 || b.y_max < 0) {
    out.push_back({ViolationKind::kNegativeCoordinate, field, "negative coordinate"});
  }
  if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max)) {
    out.push_back({ViolationKind::kDegenerateBox, field, "box has zero or negative extent"});
    return;
  }
  if (!within_image(b, image.width, image.height)) {
    out.push_back({ViolationKind::kOutOfBounds, field, "box exceeds image bounds"});
  }
}

void check_position_ref(const ReadingPosition& p, const PageDocument& doc, const std::string& field,
                        std::set<std::pair<int, std::size_t>>& seen, std::vector<Violation>& out) {
  const std::size_t limit =
      p.kind == SlotKind::kLegible ? doc.chars.size() : doc.damage_boxes.size();
  if (p.index >= limit) {
    out.push_back({ViolationKind::kBadReference, field, "index out of range"});
    return;
  }
  if (!seen.insert({static_cast<int>(p.kind), p.index}).second) {
    out.push_back({ViolationKind::kDuplicateReference, field, "position referenced twice"});
  }
}

}  // namespace

std::vector<Violation> validate_page(const PageDocument& doc) {
  std::vector<Violation> out;
  if (doc.image.width <= 0 || doc.image.height <= 0) {
    out.push_back({ViolationKind::kBadImage, "image", "image dimensions must be positive"});
  }
  for (std::size_t i = 0; i < doc.chars.size(); ++i) {
    const auto field = "chars[" + std::to_string(i) + "]";
    const auto& obs = doc.chars[i];
    check_box(obs.box(), doc.image, field + ".box", out);
    std::set<std::string> labels;
    const auto& cands = obs.candidates();
    for (std::size_t c = 0; c < cands.size(); ++c) {
      const auto cf = field + ".candidates[" + std::to_string(c) + "]";
      if (!(cands[c].prob >= 0.0 && cands[c].prob <= 1.0)) {
        out.push_back({ViolationKind::kProbabilityRange, cf, "probability outside [0,1]"});
      }
      if (c > 0 && cands[c].prob > cands[c - 1].prob) {
        out.push_back({ViolationKind::kUnsortedCandidates, cf, "probabilities increase"});
      }
      if (!labels.insert(cands[c].label).second) {
        out.push_back({ViolationKind::kDuplicateLabel, cf, "label repeated"});
      }
    }
  }
  for (std::size_t i = 0; i < doc.damage_boxes.size(); ++i) {
    check_box(doc.damage_boxes[i].box, doc.image, "damage_boxes[" + std::to_string(i) + "].box", out);
  }
  {
    std::set<std::pair<int, std::size_t>> seen;
    for (std::size_t i = 0; i < doc.reading_order.size(); ++i) {
      const auto field = "reading_order[" + std::to_string(i) + "]";
      check_position_ref(doc.reading_order[i], doc, field, seen, out);
    }
  }
  {
    std::set<std::pair<int, std::size_t>> seen;
    for (std::size_t l = 0; l < doc.lines.size(); ++l) {
      for (std::size_t i = 0; i < doc.lines[l].size(); ++i) {
        const auto field = "lines[" + std::to_string(l) + "][" + std::to_string(i) + "]";
        check_position_ref(doc.lines[l][i], doc, field, seen, out);
      }
    }
  }
  return out;
}

json to_json(const BBox& box) { return json::array({box.x_min, box.y_min, box.x_max, box.y_max}); }

BBox box_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 4) throw ParseError(field, "expected [x_min, y_min, x_max, y_max]");
  double v[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) throw ParseError(field, "coordinate is not a number");
    v[i] = j[i].get<double>();
    if (!std::isfinite(v[i])) throw ParseError(field, "coordinate is not finite");
    if (v[i] < 0) throw ParseError(field, "negative coordinate");
  }
  BBox b{v[0], v[1], v[2], v[3]};
  if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max)) throw ParseError(field, "degenerate box");
  return b;
}

namespace {

json position_json(const ReadingPosition& p, bool with_box) {
  json j = {{"kind", to_string(p.kind)}, {"index", p.index}};
  if (with_box) j["box"] = to_json(p.box);
  return j;
}

const json& require(const json& j, const char* key, const std::string& field) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(field + "." + key, "missing field");
  return *it;
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw ParseError(field, "expected a string");
  return j.get<std::string>();
}

template <typename F>
auto parse_enum(const json& j, const std::string& field, F parse) {
  const auto s = get_string(j, field);
  try {
    return parse(s);
  } catch (const ContractError& e) {
    throw ParseError(field, e.what());
  }
}

ReadingPosition position_from_json(const json& j, const std::string& field, bool with_box) {
  if (!j.is_object()) throw ParseError(field, "expected an object");
  ReadingPosition p;
  p.kind = parse_enum(require(j, "kind", field), field + ".kind", parse_slot_kind);
  const auto& idx = require(j, "index", field);
  if (!idx.is_number_unsigned()) throw ParseError(field + ".index", "expected a non-negative integer");
  p.index = idx.get<std::size_t>();
  if (with_box) p.box = box_from_json(require(j, "box", field), field + ".box");
  return p;
}

}  // namespace

json to_json(const AnnotationDoc& doc) {
  const auto& page = doc.page;
  json j;
  j["schema_version"] = kAnnotationSchemaVersion;
  j["image"] = {{"path", page.image.path}, {"width", page.image.width}, {"height", page.image.height}};
  json chars = json::array();
  for (std::size_t i = 0; i < page.chars.size(); ++i) {
    const auto& obs = page.chars[i];
    json c;
    c["box"] = to_json(obs.box());
    json cands = json::array();
    for (const auto& cand : obs.candidates()) cands.push_back(json::array({cand.label, cand.prob}));
    c["candidates"] = std::move(cands);
    c["source"] = to_string(obs.source());
    if (i < doc.char_truth.size()) {
      const auto& t = doc.char_truth[i];
      if (t.grade) c["grade"] = to_string(*t.grade);
      if (t.gt_label) c["gt_label"] = *t.gt_label;
    }
    chars.push_back(std::move(c));
  }
  j["chars"] = std::move(chars);
  json damage = json::array();
  for (const auto& d : page.damage_boxes) {
    json e;
    e["box"] = to_json(d.box);
    if (d.grade) e["grade"] = to_string(*d.grade);
    if (d.gt_label) e["gt_label"] = *d.gt_label;
    damage.push_back(std::move(e));
  }
  j["damage_boxes"] = std::move(damage);
  json lines = json::array();
  for (const auto& line : page.lines) {
    json l = json::array();
    for (const auto& p : line) l.push_back(position_json(p, false));
    lines.push_back(std::move(l));
  }
  j["lines"] = std::move(lines);
  json order = json::array();
  for (const auto& p : page.reading_order) order.push_back(position_json(p, true));
  j["reading_order"] = std::move(order);
  return j;
}

AnnotationDoc annotation_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("$", "expected a JSON object");
  const auto& ver = require(j, "schema_version", "$");
  if (!ver.is_number_integer() || ver.get<int>() != kAnnotationSchemaVersion) {
    throw ParseError("schema_version", "unsupported schema version");
  }
  AnnotationDoc doc;
  auto& page = doc.page;
  const auto& image = require(j, "image", "$");
  if (!image.is_object()) throw ParseError("image", "expected an object");
  page.image.path = get_string(require(image, "path", "image"), "image.path");
  const auto& w = require(image, "width", "image");
  const auto& h = require(image, "height", "image");
  if (!w.is_number_integer() || !h.is_number_integer()) throw ParseError("image", "width/height must be integers");
  page.image.width = w.get<int>();
  page.image.height = h.get<int>();

  const auto& chars = require(j, "chars", "$");
  if (!chars.is_array()) throw ParseError("chars", "expected an array");
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const auto field = "chars[" + std::to_string(i) + "]";
    const auto& c = chars[i];
    if (!c.is_object()) throw ParseError(field, "expected an object");
    const BBox box = box_from_json(require(c, "box", field), field + ".box");
    std::vector<Candidate> cands;
    const auto& cj = require(c, "candidates", field);
    if (!cj.is_array()) throw ParseError(field + ".candidates", "expected an array");
    for (std::size_t k = 0; k < cj.size(); ++k) {
      const auto cf = field + ".candidates[" + std::to_string(k) + "]";
      const auto& e = cj[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number()) {
        throw ParseError(cf, "expected [label, prob]");
      }
      const double p = e[1].get<double>();
      if (!(p >= 0.0 && p <= 1.0)) throw ParseError(cf, "probability outside [0,1]");
      cands.push_back({e[0].get<std::string>(), p});
    }
    const auto source = parse_enum(require(c, "source", field), field + ".source", parse_observation_source);
    page.chars.emplace_back(box, std::move(cands), source);
    CharTruth truth;
    if (auto it = c.find("grade"); it != c.end()) {
      truth.grade = parse_enum(*it, field + ".grade", parse_damage_grade);
    }
    if (auto it = c.find("gt_label"); it != c.end()) truth.gt_label = get_string(*it, field + ".gt_label");
    doc.char_truth.push_back(std::move(truth));
  }

  const auto& damage = require(j, "damage_boxes", "$");
  if (!damage.is_array()) throw ParseError("damage_boxes", "expected an array");
  for (std::size_t i = 0; i < damage.size(); ++i) {
    const auto field = "damage_boxes[" + std::to_string(i) + "]";
    const auto& d = damage[i];
    if (!d.is_object()) throw ParseError(field, "expected an object");
    DamageBox db;
    db.box = box_from_json(require(d, "box", field), field + ".box");
    if (auto it = d.find("grade"); it != d.end()) db.grade = parse_enum(*it, field + ".grade", parse_damage_grade);
    if (auto it = d.find("gt_label"); it != d.end()) db.gt_label = get_string(*it, field + ".gt_label");
    page.damage_boxes.push_back(std::move(db));
  }

  const auto& lines = require(j, "lines", "$");
  if (!lines.is_array()) throw ParseError("lines", "expected an array");
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto field = "lines[" + std::to_string(l) + "]";
    if (!lines[l].is_array()) throw ParseError(field, "expected an array");
    std::vector<ReadingPosition> line;
    for (std::size_t i = 0; i < lines[l].size(); ++i) {
      line.push_back(position_from_json(lines[l][i], field + "[" + std::to_string(i) + "]", false));
    }
    page.lines.push_back(std::move(line));
  }

  const auto& order = require(j, "reading_order", "$");
  if (!order.is_array()) throw ParseError("reading_order", "expected an array");
  for (std::size_t i = 0; i < order.size(); ++i) {
    page.reading_order.push_back(
        position_from_json(order[i], "reading_order[" + std::to_string(i) + "]", true));
  }

  // Line entries are stored as references; their boxes come from the
  // referenced items.
  for (auto& line : page.lines) {
    for (auto& p : line) {
      if (p.kind == SlotKind::kLegible && p.index < page.chars.size()) p.box = page.chars[p.index].box();
      if (p.kind == SlotKind::kDamaged && p.index < page.damage_boxes.size()) p.box = page.damage_boxes[p.index].box;
    }
  }

  const auto violations = validate_page(page);
  if (!violations.empty()) {
    throw ValidationError(violations.front().field, violations.front().message);
  }
  return doc;
}

AnnotationDoc read_annotation(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", std::string("invalid JSON: ") + e.what());
  }
  return annotation_from_json(j);
}

void write_annotation(const AnnotationDoc& doc, const std::filesystem::path& path) {
  write_file_atomic(path, to_json(doc).dump(2) + "\n");
}

AnnotationDoc make_annotation(PageDocument page) {
  AnnotationDoc doc;
  doc.char_truth.resize(page.chars.size());
  doc.page = std::move(page);
  return doc;
}

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  static std::atomic<unsigned long> counter{0};
  return path.string() + ".tmp." + std::to_string(counter.fetch_add(1));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  const auto tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace docrestore
