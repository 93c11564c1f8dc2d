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


#include "docrestore/synthesis/degradation.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "docrestore/core/errors.h"
#include "docrestore/core/rng.h"

namespace docrestore::synthesis {

std::string_view to_string(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::kCharMissing: return "char_missing";
    case DegradationKind::kPaperDamage: return "paper_damage";
    case DegradationKind::kInkErosion: return "ink_erosion";
  }
  return "char_missing";
}

DegradationKind parse_degradation_kind(std::string_view text) {
  if (text == "char_missing") return DegradationKind::kCharMissing;
  if (text == "paper_damage") return DegradationKind::kPaperDamage;
  if (text == "ink_erosion") return DegradationKind::kInkErosion;
  throw ContractError("unknown degradation kind '" + std::string(text) + "'");
}

namespace {

void check_range(const Range& r, double lo, double hi, const char* name) {
  if (!(r.lo <= r.hi) || r.lo < lo || r.hi > hi) {
    throw ContractError(std::string(name) + " range must be non-empty and within [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

std::string_view fill_name(FillColor f) {
  switch (f) {
    case FillColor::kBlack: return "black";
    case FillColor::kWhite: return "white";
    case FillColor::kRandom: return "random";
  }
  return "random";
}

FillColor parse_fill(std::string_view s) {
  if (s == "black") return FillColor::kBlack;
  if (s == "white") return FillColor::kWhite;
  if (s == "random") return FillColor::kRandom;
  throw ContractError("unknown fill colour '" + std::string(s) + "'");
}

nlohmann::json range_json(const Range& r) { return nlohmann::json::array({r.lo, r.hi}); }

Range range_from(const nlohmann::json& j, const Range& fallback) {
  if (j.is_null()) return fallback;
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

void DegradationRecipe::validate() const {
  check_range(char_missing.char_fraction, 0, 1, "char_missing.char_fraction");
  check_range(char_missing.removal, 0, 1, "char_missing.removal");
  if (char_missing.ring_width < 1) throw ContractError("char_missing.ring_width must be >= 1");
  check_range(paper_damage.coverage, 0, 1, "paper_damage.coverage");
  check_range(paper_damage.blob_count, 0, 1e6, "paper_damage.blob_count");
  check_range(ink_erosion.kernel, 1, 63, "ink_erosion.kernel");
  check_range(ink_erosion.blur_radius, 0, 32, "ink_erosion.blur_radius");
  check_range(ink_erosion.noise_density, 0, 1, "ink_erosion.noise_density");
}

nlohmann::json to_json(const DegradationRecipe& r) {
  nlohmann::json kinds = nlohmann::json::array();
  for (auto k : r.kinds) kinds.push_back(to_string(k));
  return {{"kinds", kinds},
          {"seed", r.seed},
          {"char_missing",
           {{"char_fraction", range_json(r.char_missing.char_fraction)},
            {"removal", range_json(r.char_missing.removal)},
            {"ring_width", r.char_missing.ring_width}}},
          {"paper_damage",
           {{"coverage", range_json(r.paper_damage.coverage)},
            {"blob_count", range_json(r.paper_damage.blob_count)},
            {"fill", fill_name(r.paper_damage.fill)}}},
          {"ink_erosion",
           {{"kernel", range_json(r.ink_erosion.kernel)},
            {"blur_radius", range_json(r.ink_erosion.blur_radius)},
            {"noise_density", range_json(r.ink_erosion.noise_density)}}}};
}

DegradationRecipe recipe_from_json(const nlohmann::json& j) {
  DegradationRecipe r;
  try {
    for (const auto& k : j.value("kinds", nlohmann::json::array())) {
      r.kinds.insert(parse_degradation_kind(k.get<std::string>()));
    }
    r.seed = j.value("seed", std::uint64_t{0});
    const auto cm = j.value("char_missing", nlohmann::json::object());
    r.char_missing.char_fraction = range_from(cm.value("char_fraction", nlohmann::json()), r.char_missing.char_fraction);
    r.char_missing.removal = range_from(cm.value("removal", nlohmann::json()), r.char_missing.removal);
    r.char_missing.ring_width = cm.value("ring_width", r.char_missing.ring_width);
    const auto pd = j.value("paper_damage", nlohmann::json::object());
    r.paper_damage.coverage = range_from(pd.value("coverage", nlohmann::json()), r.paper_damage.coverage);
    r.paper_damage.blob_count = range_from(pd.value("blob_count", nlohmann::json()), r.paper_damage.blob_count);
    r.paper_damage.fill = parse_fill(pd.value("fill", std::string("random")));
    const auto ie = j.value("ink_erosion", nlohmann::json::object());
    r.ink_erosion.kernel = range_from(ie.value("kernel", nlohmann::json()), r.ink_erosion.kernel);
    r.ink_erosion.blur_radius = range_from(ie.value("blur_radius", nlohmann::json()), r.ink_erosion.blur_radius);
    r.ink_erosion.noise_density = range_from(ie.value("noise_density", nlohmann::json()), r.ink_erosion.noise_density);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("recipe", e.what());
  } catch (const ContractError& e) {
    throw ParseError("recipe", e.what());
  }
  r.validate();
  return r;
}

DamageGrade grade_for_removed_fraction(double removed) {
  if (removed >= 0.8) return DamageGrade::kSevere;
  if (removed >= 0.4) return DamageGrade::kMedium;
  return DamageGrade::kLight;
}

namespace {

enum : std::uint64_t { kSaltCharMissing = 1, kSaltPaper = 2, kSaltErosion = 3 };

std::vector<std::uint8_t> ring_median(const Image& img, const PixelRect& r, int ring) {
  std::vector<std::vector<std::uint8_t>> samples(static_cast<std::size_t>(img.channels()));
  const int x0 = std::max(0, r.x0 - ring), x1 = std::min(img.width(), r.x1 + ring);
  const int y0 = std::max(0, r.y0 - ring), y1 = std::min(img.height(), r.y1 + ring);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (x >= r.x0 && x < r.x1 && y >= r.y0 && y < r.y1) continue;
      for (int c = 0; c < img.channels(); ++c) samples[static_cast<std::size_t>(c)].push_back(img.at(x, y, c));
    }
  }
  std::vector<std::uint8_t> out;
  for (auto& s : samples) {
    if (s.empty()) {
      out.push_back(255);
      continue;
    }
    auto mid = s.begin() + static_cast<std::ptrdiff_t>(s.size() / 2);
    std::nth_element(s.begin(), mid, s.end());
    out.push_back(*mid);
  }
  return out;
}

std::size_t count_glyph_pixels(const Image& img, const PixelRect& r) {
  std::size_t n = 0;
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) n += img.luminance(x, y) < kInkThreshold;
  }
  return n;
}

}  // namespace

CharMissingResult synth_char_missing(const Image& image, std::span<const BBox> char_boxes,
                                     const DegradationRecipe& recipe) {
  recipe.validate();
  const auto& p = recipe.char_missing;
  Rng rng(mix_seed(recipe.seed, kSaltCharMissing));
  CharMissingResult out{image, Image(image.width(), image.height(), 1, 0), {}};

  const double fraction = rng.uniform(p.char_fraction.lo, p.char_fraction.hi);
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(char_boxes.size())));
  for (std::size_t idx : rng.sample_indices(char_boxes.size(), count)) {
    const BBox& box = char_boxes[idx];
    const PixelRect r = to_pixels(box, image.width(), image.height());
    if (r.empty()) continue;
    const double removal = rng.uniform(p.removal.lo, p.removal.hi);
    PixelRect region = r;
    if (removal < 0.999) {
      // Sub-rectangle of the box with area share `removal`.
      const double aspect = rng.uniform(std::max(removal, 1e-6), 1.0);
      const int w = std::clamp(static_cast<int>(std::lround(r.width() * aspect)), 0, r.width());
      const int h = std::clamp(
          static_cast<int>(std::lround(r.height() * removal / std::max(aspect, 1e-6))), 0, r.height());
      const int ox = static_cast<int>(rng.range(0, r.width() - w));
      const int oy = static_cast<int>(rng.range(0, r.height() - h));
      region = {r.x0 + ox, r.y0 + oy, r.x0 + ox + w, r.y0 + oy + h};
    }
    const auto fill = ring_median(image, r, p.ring_width);
    const std::size_t glyph_total = count_glyph_pixels(image, r);
    const std::size_t glyph_removed = region.empty() ? 0 : count_glyph_pixels(image, region);
    for (int y = region.y0; y < region.y1; ++y) {
      for (int x = region.x0; x < region.x1; ++x) {
        out.damaged.set_pixel(x, y, fill);
        out.altered.at(x, y) = 1;
      }
    }
    const double removed = glyph_total ? static_cast<double>(glyph_removed) / static_cast<double>(glyph_total) : 0.0;
    out.affected.push_back({idx, box, grade_for_removed_fraction(removed), removed});
  }
  return out;
}

PaperDamageResult synth_paper_damage(const Image& image, const DegradationRecipe& recipe) {
  recipe.validate();
  const auto& p = recipe.paper_damage;
  Rng rng(mix_seed(recipe.seed, kSaltPaper));
  PaperDamageResult out{image, Image(image.width(), image.height(), 1, 0)};
  const auto total = static_cast<std::int64_t>(image.pixel_count());
  if (total == 0) return out;

  const auto lo = static_cast<std::int64_t>(std::ceil(p.coverage.lo * static_cast<double>(total) - 1e-9));
  const auto hi = static_cast<std::int64_t>(std::floor(p.coverage.hi * static_cast<double>(total) + 1e-9));
  const auto target = std::clamp(
      static_cast<std::int64_t>(std::llround(rng.uniform(p.coverage.lo, p.coverage.hi) * static_cast<double>(total))),
      lo, std::max(lo, hi));
  if (target <= 0) return out;

  std::int64_t covered = 0;
  auto colour = [&]() -> std::uint8_t {
    switch (p.fill) {
      case FillColor::kBlack: return 0;
      case FillColor::kWhite: return 255;
      case FillColor::kRandom: return rng.bernoulli(0.5) ? 0 : 255;
    }
    return 0;
  };
  auto pick_uncovered = [&](int& cx, int& cy) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      cx = static_cast<int>(rng.below(static_cast<std::uint64_t>(image.width())));
      cy = static_cast<int>(rng.below(static_cast<std::uint64_t>(image.height())));
      if (!out.mask.at(cx, cy)) return;
    }
    for (cy = 0; cy < image.height(); ++cy) {
      for (cx = 0; cx < image.width(); ++cx) {
        if (!out.mask.at(cx, cy)) return;
      }
    }
  };
  // Paints up to `budget` new pixels of an ellipse of the given area.
  auto paint_blob = [&](double area, std::int64_t budget) {
    int cx = 0, cy = 0;
    pick_uncovered(cx, cy);
    const double aspect = rng.uniform(0.5, 2.0);
    const double rx = std::max(0.75, std::sqrt(area / (std::numbers::pi * aspect)));
    const double ry = std::max(0.75, rx * aspect);
    const std::uint8_t value = colour();
    const std::array<std::uint8_t, 1> fill{value};
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - rx)));
    const int x1 = std::min(image.width() - 1, static_cast<int>(std::ceil(cx + rx)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - ry)));
    const int y1 = std::min(image.height() - 1, static_cast<int>(std::ceil(cy + ry)));
    std::int64_t painted = 0;
    for (int y = y0; y <= y1 && painted < budget; ++y) {
      for (int x = x0; x <= x1 && painted < budget; ++x) {
        const double dx = (x - cx) / rx, dy = (y - cy) / ry;
        if (dx * dx + dy * dy > 1.0 || out.mask.at(x, y)) continue;
        out.mask.at(x, y) = 1;
        out.damaged.set_pixel(x, y, fill);
        ++painted;
      }
    }
    covered += painted;
  };

  const auto blobs = static_cast<std::int64_t>(
      rng.range(static_cast<std::int64_t>(p.blob_count.lo), static_cast<std::int64_t>(p.blob_count.hi)));
  for (std::int64_t b = 0; b < blobs && covered < target; ++b) {
    const double share = static_cast<double>(target - covered) / static_cast<double>(blobs - b);
    paint_blob(share, target - covered);
  }
  while (covered < target) paint_blob(static_cast<double>(target - covered), target - covered);
  return out;
}

namespace {

// Separable max filter of odd size k (lightens, so dark strokes thin).
Image max_filter(const Image& img, int k) {
  const int r = k / 2;
  Image tmp = img, out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        std::uint8_t m = 0;
        for (int d = -r; d <= r; ++d) {
          const int xx = std::clamp(x + d, 0, img.width() - 1);
          m = std::max(m, img.at(xx, y, c));
        }
        tmp.at(x, y, c) = m;
      }
    }
  }
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        std::uint8_t m = 0;
        for (int d = -r; d <= r; ++d) {
          const int yy = std::clamp(y + d, 0, img.height() - 1);
          m = std::max(m, tmp.at(x, yy, c));
        }
        out.at(x, y, c) = m;
      }
    }
  }
  return out;
}

Image box_blur(const Image& img, int radius) {
  Image tmp = img, out = img;
  const int n = 2 * radius + 1;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        int sum = 0;
        for (int d = -radius; d <= radius; ++d) sum += img.at(std::clamp(x + d, 0, img.width() - 1), y, c);
        tmp.at(x, y, c) = static_cast<std::uint8_t>((sum + n / 2) / n);
      }
    }
  }
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        int sum = 0;
        for (int d = -radius; d <= radius; ++d) sum += tmp.at(x, std::clamp(y + d, 0, img.height() - 1), c);
        out.at(x, y, c) = static_cast<std::uint8_t>((sum + n / 2) / n);
      }
    }
  }
  return out;
}

}  // namespace

Image synth_ink_erosion(const Image& image, const DegradationRecipe& recipe) {
  recipe.validate();
  const auto& p = recipe.ink_erosion;
  Rng rng(mix_seed(recipe.seed, kSaltErosion));
  int kernel = static_cast<int>(rng.range(static_cast<std::int64_t>(p.kernel.lo), static_cast<std::int64_t>(p.kernel.hi)));
  if (kernel % 2 == 0) kernel = kernel + 1 <= static_cast<int>(p.kernel.hi) ? kernel + 1 : kernel - 1;
  const int radius = static_cast<int>(
      rng.range(static_cast<std::int64_t>(p.blur_radius.lo), static_cast<std::int64_t>(p.blur_radius.hi)));
  const double density = rng.uniform(p.noise_density.lo, p.noise_density.hi);

  Image out = image;
  if (kernel > 1) out = max_filter(out, kernel);
  if (radius > 0) out = box_blur(out, radius);
  if (density > 0) {
    for (int y = 0; y < out.height(); ++y) {
      for (int x = 0; x < out.width(); ++x) {
        if (!rng.bernoulli(density)) continue;
        for (int c = 0; c < out.channels(); ++c) out.at(x, y, c) = static_cast<std::uint8_t>(255 - out.at(x, y, c));
      }
    }
  }
  return out;
}

ToyPage generate_toy_page(const ToyPageSpec& spec, const GlyphAtlas& atlas, std::uint64_t seed) {
  if (spec.columns < 1 || spec.chars_per_column < 1 || spec.min_glyph < 4 ||
      spec.max_glyph < spec.min_glyph || spec.column_pitch < spec.max_glyph + 8) {
    throw ContractError("invalid toy page spec");
  }
  std::vector<std::string> alphabet = spec.alphabet.empty() ? atlas.labels() : spec.alphabet;
  if (alphabet.empty()) throw ContractError("toy page alphabet is empty");
  for (const auto& label : alphabet) {
    if (!atlas.contains(label)) throw ContractError("glyph atlas has no glyph for '" + label + "'");
  }

  Rng rng(seed);
  constexpr int kJitter = 3;
  constexpr int kMinGap = 6, kMaxGap = 12;
  const int width = 2 * spec.margin + spec.columns * spec.column_pitch;
  const int height = 2 * spec.margin + spec.chars_per_column * (spec.max_glyph + kMaxGap) + 4;

  ToyPage page;
  page.image = Image(width, height, 3);
  const std::array<std::uint8_t, 3> paper{226, 208, 170};
  const std::array<std::uint8_t, 3> ink{40, 32, 28};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int n = static_cast<int>(rng.range(-3, 3));
      for (int c = 0; c < 3; ++c) page.image.at(x, y, c) = static_cast<std::uint8_t>(paper[static_cast<std::size_t>(c)] + n);
    }
  }

  auto& doc = page.annotation;
  doc.page.image = {"", width, height};
  for (int col = 0; col < spec.columns; ++col) {
    const double center = width - spec.margin - spec.column_pitch * (col + 0.5);
    int cursor = spec.margin + static_cast<int>(rng.range(0, 4));
    std::vector<ReadingPosition> line;
    for (int row = 0; row < spec.chars_per_column; ++row) {
      const int w = static_cast<int>(rng.range(spec.min_glyph, spec.max_glyph));
      const int h = static_cast<int>(rng.range(spec.min_glyph, spec.max_glyph));
      const int cx = static_cast<int>(std::lround(center)) + static_cast<int>(rng.range(-kJitter, kJitter));
      const BBox box{static_cast<double>(cx - w / 2), static_cast<double>(cursor),
                     static_cast<double>(cx - w / 2 + w), static_cast<double>(cursor + h)};
      cursor += h + static_cast<int>(rng.range(kMinGap, kMaxGap));
      const auto& label = alphabet[rng.below(alphabet.size())];

      const PixelRect r = to_pixels(box, width, height);
      const auto bits = rasterize_glyph(*atlas.find(label), r.width(), r.height());
      for (int y = 0; y < r.height(); ++y) {
        for (int x = 0; x < r.width(); ++x) {
          if (bits[static_cast<std::size_t>(y) * r.width() + x]) page.image.set_pixel(r.x0 + x, r.y0 + y, ink);
        }
      }
      const std::size_t index = doc.page.chars.size();
      doc.page.chars.emplace_back(box, std::vector<Candidate>{}, ObservationSource::kHuman);
      doc.char_truth.push_back({std::nullopt, label});
      const ReadingPosition pos{SlotKind::kLegible, index, box};
      line.push_back(pos);
      doc.page.reading_order.push_back(pos);
    }
    doc.page.lines.push_back(std::move(line));
  }
  return page;
}

DamagedPair make_pair(const Image& clean, const AnnotationDoc& annotation,
                      const DegradationRecipe& recipe) {
  recipe.validate();
  DamagedPair out{clean, clean, annotation, Image(clean.width(), clean.height(), 1, 0)};
  std::vector<BBox> boxes;
  for (const auto& c : annotation.page.chars) boxes.push_back(c.box());

  if (recipe.kinds.contains(DegradationKind::kCharMissing)) {
    auto cm = synth_char_missing(out.damaged, boxes, recipe);
    out.damaged = std::move(cm.damaged);
    for (std::size_t i = 0; i < out.altered.data().size(); ++i) out.altered.data()[i] |= cm.altered.data()[i];
  }
  if (recipe.kinds.contains(DegradationKind::kPaperDamage)) {
    auto pd = synth_paper_damage(out.damaged, recipe);
    out.damaged = std::move(pd.damaged);
    for (std::size_t i = 0; i < out.altered.data().size(); ++i) out.altered.data()[i] |= pd.mask.data()[i];
  }
  if (recipe.kinds.contains(DegradationKind::kInkErosion)) {
    out.damaged = synth_ink_erosion(out.damaged, recipe);
  }

  auto& doc = out.annotation;
  doc.page.damage_boxes.clear();
  doc.char_truth.resize(doc.page.chars.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const PixelRect r = to_pixels(boxes[i], clean.width(), clean.height());
    std::size_t glyph = 0, destroyed = 0, touched = 0;
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        const bool altered = out.altered.at(x, y) != 0;
        touched += altered;
        if (clean.luminance(x, y) < kInkThreshold) {
          ++glyph;
          destroyed += altered;
        }
      }
    }
    if (touched == 0) continue;
    const double removed = glyph ? static_cast<double>(destroyed) / static_cast<double>(glyph) : 0.0;
    const DamageGrade grade = grade_for_removed_fraction(removed);
    doc.char_truth[i].grade = grade;
    doc.page.damage_boxes.push_back({boxes[i], grade, doc.char_truth[i].gt_label});
  }
  return out;
}

}  // namespace docrestore::synthesis
