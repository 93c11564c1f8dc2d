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

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace docrestore {

// Square binary bitmap, row-major, 1 = ink.
struct Glyph {
  int size = 0;
  std::vector<std::uint8_t> bits;
  bool ink(int x, int y) const { return bits[static_cast<std::size_t>(y) * size + x] != 0; }
};

// Raster glyph source used to render content images and synthetic pages.
class GlyphAtlas {
 public:
  explicit GlyphAtlas(int cell_size = 16);

  // Deterministic stroke glyphs for every label of `alphabet`, pairwise
  // distinct.
  static GlyphAtlas procedural(std::span<const std::string> alphabet, int cell_size,
                               std::uint64_t seed);

  int cell_size() const { return cell_size_; }
  void add(const std::string& label, Glyph glyph);
  const Glyph* find(const std::string& label) const;
  bool contains(const std::string& label) const { return find(label) != nullptr; }
  std::vector<std::string> labels() const;
  std::size_t size() const { return glyphs_.size(); }

  nlohmann::json to_json() const;
  static GlyphAtlas from_json(const nlohmann::json& j);
  static GlyphAtlas load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  int cell_size_;
  std::map<std::string, Glyph> glyphs_;
};

// Nearest-neighbour scaling of `glyph` to width x height; 1 = ink.
std::vector<std::uint8_t> rasterize_glyph(const Glyph& glyph, int width, int height);

// A fixed alphabet of common CJK characters for toy pages and tests.
std::vector<std::string> default_alphabet();

}  // namespace docrestore
