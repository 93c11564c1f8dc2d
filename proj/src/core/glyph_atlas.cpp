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


#include "docrestore/core/glyph_atlas.h"

#include <algorithm>

#include "docrestore/core/annotation_io.h"
#include "docrestore/core/errors.h"
#include "docrestore/core/rng.h"
#include "docrestore/core/utf8.h"

namespace docrestore {

GlyphAtlas::GlyphAtlas(int cell_size) : cell_size_(cell_size) {
  if (cell_size < 4) throw ContractError("glyph cell size must be >= 4");
}

namespace {

void draw_stroke(Glyph& g, Rng& rng) {
  const int n = g.size;
  const int thickness = std::max(1, n / 8);
  auto plot = [&](int x, int y) {
    for (int dy = 0; dy < thickness; ++dy) {
      for (int dx = 0; dx < thickness; ++dx) {
        const int px = x + dx, py = y + dy;
        if (px >= 0 && py >= 0 && px < n && py < n) g.bits[static_cast<std::size_t>(py) * n + px] = 1;
      }
    }
  };
  const int margin = std::max(1, n / 8);
  const int lo = margin, hi = n - margin - thickness;
  const auto a = static_cast<int>(rng.range(lo, hi));
  const auto b = static_cast<int>(rng.range(lo, hi));
  auto c = static_cast<int>(rng.range(lo, hi));
  if (std::abs(c - b) < n / 3) c = b < n / 2 ? hi : lo;
  switch (rng.below(4)) {
    case 0:  // horizontal
      for (int x = std::min(b, c); x <= std::max(b, c); ++x) plot(x, a);
      break;
    case 1:  // vertical
      for (int y = std::min(b, c); y <= std::max(b, c); ++y) plot(a, y);
      break;
    default: {  // diagonal from (b, a) towards (c, a +- span)
      const int span = std::abs(c - b);
      const int dir = rng.bernoulli(0.5) ? 1 : -1;
      const int step_x = c > b ? 1 : -1;
      for (int t = 0; t <= span; ++t) {
        const int y = std::clamp(a + dir * t, lo, hi);
        plot(b + step_x * t, y);
      }
    }
  }
}

double jaccard(const Glyph& a, const Glyph& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    inter += a.bits[i] && b.bits[i];
    uni += a.bits[i] || b.bits[i];
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
}

}  // namespace

GlyphAtlas GlyphAtlas::procedural(std::span<const std::string> alphabet, int cell_size,
                                  std::uint64_t seed) {
  GlyphAtlas atlas(cell_size);
  std::vector<const Glyph*> made;
  for (const auto& label : alphabet) {
    if (atlas.contains(label)) continue;
    Rng rng(mix_seed(seed, label));
    Glyph best;
    double best_overlap = 2.0;
    for (int attempt = 0; attempt < 64; ++attempt) {
      Glyph g{cell_size, std::vector<std::uint8_t>(static_cast<std::size_t>(cell_size) * cell_size, 0)};
      const auto strokes = rng.range(3, 6);
      for (std::int64_t s = 0; s < strokes; ++s) draw_stroke(g, rng);
      double overlap = 0;
      for (const auto& label2 : atlas.labels()) overlap = std::max(overlap, jaccard(g, *atlas.find(label2)));
      if (overlap < best_overlap) {
        best_overlap = overlap;
        best = std::move(g);
      }
      if (best_overlap < 0.5) break;
    }
    atlas.add(label, std::move(best));
  }
  return atlas;
}

void GlyphAtlas::add(const std::string& label, Glyph glyph) {
  if (glyph.size != cell_size_ ||
      glyph.bits.size() != static_cast<std::size_t>(cell_size_) * cell_size_) {
    throw ContractError("glyph size does not match atlas cell size");
  }
  glyphs_[label] = std::move(glyph);
}

const Glyph* GlyphAtlas::find(const std::string& label) const {
  auto it = glyphs_.find(label);
  return it == glyphs_.end() ? nullptr : &it->second;
}

std::vector<std::string> GlyphAtlas::labels() const {
  std::vector<std::string> out;
  for (const auto& [label, _] : glyphs_) out.push_back(label);
  return out;
}

nlohmann::json GlyphAtlas::to_json() const {
  nlohmann::json glyphs = nlohmann::json::object();
  for (const auto& [label, g] : glyphs_) {
    nlohmann::json rows = nlohmann::json::array();
    for (int y = 0; y < g.size; ++y) {
      std::string row;
      for (int x = 0; x < g.size; ++x) row += g.ink(x, y) ? '#' : '.';
      rows.push_back(row);
    }
    glyphs[label] = std::move(rows);
  }
  return {{"cell_size", cell_size_}, {"glyphs", std::move(glyphs)}};
}

GlyphAtlas GlyphAtlas::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("cell_size") || !j["cell_size"].is_number_integer()) {
    throw ParseError("cell_size", "missing or not an integer");
  }
  GlyphAtlas atlas(j["cell_size"].get<int>());
  const int n = atlas.cell_size_;
  if (!j.contains("glyphs") || !j["glyphs"].is_object()) throw ParseError("glyphs", "expected an object");
  for (const auto& [label, rows] : j["glyphs"].items()) {
    const auto field = "glyphs." + label;
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n)) {
      throw ParseError(field, "expected " + std::to_string(n) + " rows");
    }
    Glyph g{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n, 0)};
    for (int y = 0; y < n; ++y) {
      const auto& row = rows[static_cast<std::size_t>(y)];
      if (!row.is_string() || row.get<std::string>().size() != static_cast<std::size_t>(n)) {
        throw ParseError(field + "[" + std::to_string(y) + "]", "bad row");
      }
      const auto s = row.get<std::string>();
      for (int x = 0; x < n; ++x) g.bits[static_cast<std::size_t>(y) * n + x] = s[static_cast<std::size_t>(x)] == '#';
    }
    atlas.glyphs_[label] = std::move(g);
  }
  return atlas;
}

GlyphAtlas GlyphAtlas::load(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("$", std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

void GlyphAtlas::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_json().dump(1) + "\n");
}

std::vector<std::uint8_t> rasterize_glyph(const Glyph& glyph, int width, int height) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(std::max(0, width)) * std::max(0, height), 0);
  for (int y = 0; y < height; ++y) {
    const int gy = std::min(glyph.size - 1, y * glyph.size / height);
    for (int x = 0; x < width; ++x) {
      const int gx = std::min(glyph.size - 1, x * glyph.size / width);
      out[static_cast<std::size_t>(y) * width + x] = glyph.ink(gx, gy) ? 1 : 0;
    }
  }
  return out;
}

std::vector<std::string> default_alphabet() {
  return split_code_points(
      "天地玄黄宇宙洪荒日月盈昃辰宿列张寒来暑往秋收冬藏闰余成岁律吕调阳云腾致雨露结为霜金生丽水玉出昆冈"
      "剑号巨阙珠称夜光果珍李柰菜重芥姜海咸河淡鳞潜羽翔龙师火帝鸟官人皇");
}

}  // namespace docrestore
