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


#include "docrestore/adapters/stubs.h"

#include <algorithm>
#include <cmath>
#include <regex>

#include "docrestore/core/errors.h"
#include "docrestore/core/rng.h"
#include "docrestore/core/utf8.h"

namespace docrestore::adapters {

namespace {

void check_profile(const GradeProfile& p, const char* name) {
  auto unit = [](double v) { return v >= 0 && v <= 1; };
  if (!unit(p.top1_accuracy) || !unit(p.topk_inclusion) || !unit(p.conf_lo) || !unit(p.conf_hi) ||
      p.conf_lo > p.conf_hi || p.topk_inclusion < p.top1_accuracy) {
    throw ContractError(std::string("invalid OCR grade profile '") + name + "'");
  }
}

std::uint64_t box_salt(const BBox& b) {
  auto q = [](double v) { return static_cast<std::uint64_t>(std::llround(v * 4.0)); };
  return (q(b.x_min) * 1000003ULL) ^ (q(b.y_min) * 998244353ULL) ^ (q(b.x_max) << 21) ^ (q(b.y_max) << 42);
}

// Decoys drawn without replacement from `pool`, skipping `exclude`.
std::vector<std::string> draw_decoys(const std::vector<std::string>& pool, const std::string& exclude,
                                     std::size_t count, Rng& rng) {
  std::vector<std::string> options;
  for (const auto& l : pool) {
    if (l != exclude) options.push_back(l);
  }
  std::vector<std::string> out;
  for (std::size_t i : rng.sample_indices(options.size(), count)) out.push_back(options[i]);
  rng.shuffle(out);
  return out;
}

// Non-increasing probabilities with the given top value, summing to <= 1.
std::vector<double> descending_probs(double top, std::size_t n, Rng& rng) {
  std::vector<double> p{top};
  if (n <= 1) return p;
  std::vector<double> w(n - 1);
  for (auto& v : w) v = rng.uniform(0.05, 1.0);
  std::sort(w.begin(), w.end(), std::greater<>());
  double sum = 0;
  for (double v : w) sum += v;
  const double mass = (1.0 - top) * rng.uniform(0.5, 1.0);
  for (double v : w) p.push_back(std::min(p.back(), mass * v / sum));
  return p;
}

// Places `truth` per the accuracy settings among decoys, producing a
// ranked k-list.
std::vector<Candidate> simulate_ranking(const std::string& truth, double top1, double topk,
                                        double top_prob, const std::vector<std::string>& pool,
                                        int k, Rng& rng) {
  const auto kk = static_cast<std::size_t>(k);
  int truth_rank = -1;
  if (rng.bernoulli(top1)) {
    truth_rank = 0;
  } else if (k > 1 && top1 < 1.0 && rng.bernoulli((topk - top1) / (1.0 - top1))) {
    truth_rank = static_cast<int>(rng.range(1, k - 1));
  }
  auto decoys = draw_decoys(pool, truth, truth_rank >= 0 ? kk - 1 : kk, rng);
  std::vector<std::string> labels;
  std::size_t d = 0;
  for (std::size_t r = 0; r < kk; ++r) {
    if (static_cast<int>(r) == truth_rank) {
      labels.push_back(truth);
    } else if (d < decoys.size()) {
      labels.push_back(decoys[d++]);
    }
  }
  const auto probs = descending_probs(top_prob, labels.size(), rng);
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < labels.size(); ++i) out.push_back({labels[i], probs[i]});
  return out;
}

}  // namespace

void StubOcrConfig::validate() const {
  check_profile(clean, "clean");
  check_profile(light, "light");
  check_profile(medium, "medium");
  check_profile(severe, "severe");
  if (!(match_iou >= 0 && match_iou <= 1)) throw ContractError("match_iou must lie in [0,1]");
}

StubOcr::StubOcr(StubOcrConfig config) : config_(std::move(config)) { config_.validate(); }

std::vector<Candidate> StubOcr::recognize(const Image&, const BBox& box, int k) {
  ++calls_;
  if (k < 1) throw ContractError("k must be >= 1");
  const OracleChar* match = nullptr;
  double best = config_.match_iou;
  for (const auto& o : config_.oracle) {
    const double v = iou(o.box, box);
    if (v >= best && (match == nullptr || v > best)) {
      best = v;
      match = &o;
    }
  }
  if (match == nullptr) return {};

  const GradeProfile* profile = &config_.clean;
  if (match->grade) {
    switch (*match->grade) {
      case DamageGrade::kLight: profile = &config_.light; break;
      case DamageGrade::kMedium: profile = &config_.medium; break;
      case DamageGrade::kSevere: profile = &config_.severe; break;
    }
  }
  Rng rng(mix_seed(mix_seed(config_.seed, box_salt(box)), match->label));

  if (profile->uniform) {
    const double a = static_cast<double>(std::max<std::size_t>(config_.alphabet.size(), 1));
    const bool include = rng.bernoulli(profile->topk_inclusion);
    auto labels = draw_decoys(config_.alphabet, match->label,
                              static_cast<std::size_t>(include ? k - 1 : k), rng);
    if (include) {
      const auto pos = rng.below(labels.size() + 1);
      labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(pos), match->label);
    }
    std::vector<double> probs;
    for (std::size_t i = 0; i < labels.size(); ++i) probs.push_back(rng.uniform(0.5 / a, 2.0 / a));
    std::sort(probs.begin(), probs.end(), std::greater<>());
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < labels.size(); ++i) out.push_back({labels[i], probs[i]});
    return out;
  }
  const double top = rng.uniform(profile->conf_lo, profile->conf_hi);
  return simulate_ranking(match->label, profile->top1_accuracy, profile->topk_inclusion, top,
                          config_.alphabet, k, rng);
}

void StubLmConfig::validate() const {
  auto unit = [](double v) { return v >= 0 && v <= 1; };
  if (!unit(top1_accuracy) || !unit(top5_inclusion) || top5_inclusion < top1_accuracy) {
    throw ContractError("StubLm requires 0 <= top1_accuracy <= top5_inclusion <= 1");
  }
  if (!unit(hit_prob_lo) || !unit(hit_prob_hi) || hit_prob_lo > hit_prob_hi) {
    throw ContractError("StubLm hit probability range invalid");
  }
}

StubLm::StubLm(StubLmConfig config) : config_(std::move(config)) { config_.validate(); }

std::vector<ContextToken> tokenize_context(const std::string& context) {
  static const std::regex marker(R"(^\[mask([0-9]+)\])");
  std::vector<ContextToken> tokens;
  std::size_t i = 0;
  while (i < context.size()) {
    std::smatch m;
    const std::string rest = context.substr(i, 16);
    if (context[i] == '[' && std::regex_search(rest, m, marker)) {
      tokens.push_back({m.str(0), std::stoi(m.str(1))});
      i += static_cast<std::size_t>(m.length(0));
      continue;
    }
    auto cps = split_code_points(std::string_view(context).substr(i, 4));
    tokens.push_back({cps.front(), 0});
    i += cps.front().size();
  }
  return tokens;
}

LmResponse StubLm::predict(const LmRequest& request) {
  ++calls_;
  if (request.k < 1) throw ContractError("k must be >= 1");
  const auto tokens = tokenize_context(request.context);
  LmResponse out;
  for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
    const int slot = tokens[pos].slot;
    if (slot == 0) continue;
    ++slot_queries_;
    const std::optional<std::string> truth =
        pos < config_.transcript.size() ? config_.transcript[pos] : std::nullopt;
    Rng rng(mix_seed(mix_seed(config_.seed, pos), truth.value_or("")));
    if (!truth) {
      auto labels = draw_decoys(config_.decoys, "", static_cast<std::size_t>(request.k), rng);
      const double p = labels.empty() ? 0.0 : 1.0 / static_cast<double>(config_.decoys.size());
      std::vector<Candidate> c;
      for (auto& l : labels) c.push_back({l, p});
      out[slot] = std::move(c);
      continue;
    }
    const double top = rng.uniform(config_.hit_prob_lo, config_.hit_prob_hi);
    out[slot] = simulate_ranking(*truth, config_.top1_accuracy, config_.top5_inclusion, top,
                                 config_.decoys, request.k, rng);
  }
  return out;
}

void check_inpaint_shapes(const InpaintRequest& r) {
  const auto& d = r.damaged;
  if (d.empty()) throw ContractError("inpaint: empty damaged patch");
  if (r.content.width() != d.width() || r.content.height() != d.height() || r.content.channels() != 1 ||
      r.mask.width() != d.width() || r.mask.height() != d.height() || r.mask.channels() != 1) {
    throw ContractError("inpaint: x_c and x_m must be single-channel and match x_d dimensions");
  }
}

Image StubInpaint::inpaint(const InpaintRequest& request) {
  ++calls_;
  check_inpaint_shapes(request);
  const Image& xd = request.damaged;
  Image out = xd;
  if (mode_ == InpaintMode::kIdentity) return out;
  if (mode_ == InpaintMode::kStamp) {
    for (int y = 0; y < xd.height(); ++y) {
      for (int x = 0; x < xd.width(); ++x) {
        if (!request.mask.at(x, y)) continue;
        for (int c = 0; c < xd.channels(); ++c) out.at(x, y, c) = stamp_value_;
      }
    }
    return out;
  }

  // Background: per-channel median of unmasked pixels. Ink: the pixel at the
  // 2nd luminance percentile, if clearly darker than the background.
  const int ch = xd.channels();
  std::vector<std::vector<std::uint8_t>> samples(static_cast<std::size_t>(ch));
  std::vector<std::pair<double, std::pair<int, int>>> lum;
  for (int y = 0; y < xd.height(); ++y) {
    for (int x = 0; x < xd.width(); ++x) {
      if (request.mask.at(x, y)) continue;
      for (int c = 0; c < ch; ++c) samples[static_cast<std::size_t>(c)].push_back(xd.at(x, y, c));
      lum.push_back({xd.luminance(x, y), {x, y}});
    }
  }
  std::vector<double> bg(static_cast<std::size_t>(ch), 255.0), ink(static_cast<std::size_t>(ch), 0.0);
  if (!lum.empty()) {
    for (int c = 0; c < ch; ++c) {
      auto& s = samples[static_cast<std::size_t>(c)];
      auto mid = s.begin() + static_cast<std::ptrdiff_t>(s.size() / 2);
      std::nth_element(s.begin(), mid, s.end());
      bg[static_cast<std::size_t>(c)] = *mid;
    }
    auto nth = lum.begin() + static_cast<std::ptrdiff_t>(lum.size() / 50);
    std::nth_element(lum.begin(), nth, lum.end());
    double bg_lum = 0;
    for (double v : bg) bg_lum += v / ch;
    const auto [ix, iy] = nth->second;
    for (int c = 0; c < ch; ++c) {
      ink[static_cast<std::size_t>(c)] = nth->first < bg_lum - 64 ? xd.at(ix, iy, c) : bg[static_cast<std::size_t>(c)] * 0.2;
    }
  }
  for (int y = 0; y < xd.height(); ++y) {
    for (int x = 0; x < xd.width(); ++x) {
      if (!request.mask.at(x, y)) continue;
      const double t = request.content.at(x, y) / 255.0;
      for (int c = 0; c < ch; ++c) {
        const auto cc = static_cast<std::size_t>(c);
        out.at(x, y, c) = static_cast<std::uint8_t>(std::lround(ink[cc] + (bg[cc] - ink[cc]) * t));
      }
    }
  }
  return out;
}

TemplateOcr::TemplateOcr(GlyphAtlas atlas, TemplateOcrConfig config)
    : atlas_(std::move(atlas)), config_(config) {
  if (atlas_.size() == 0) throw ContractError("template OCR needs a non-empty atlas");
  if (!(config_.temperature > 0)) throw ContractError("template OCR temperature must be > 0");
}

std::vector<TemplateOcr::Match> TemplateOcr::rank(const Image& page, const BBox& box) const {
  const PixelRect r = to_pixels(box, page.width(), page.height());
  std::vector<Match> out;
  if (r.empty()) return out;
  std::vector<std::uint8_t> observed(static_cast<std::size_t>(r.width()) * r.height());
  for (int y = 0; y < r.height(); ++y) {
    for (int x = 0; x < r.width(); ++x) {
      observed[static_cast<std::size_t>(y) * r.width() + x] = page.luminance(r.x0 + x, r.y0 + y) < config_.ink_threshold;
    }
  }
  for (const auto& label : atlas_.labels()) {
    const auto ref = rasterize_glyph(*atlas_.find(label), r.width(), r.height());
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      inter += ref[i] && observed[i];
      uni += ref[i] || observed[i];
    }
    out.push_back({label, uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0});
  }
  std::stable_sort(out.begin(), out.end(), [](const Match& a, const Match& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.label < b.label;
  });
  return out;
}

std::vector<Candidate> TemplateOcr::recognize(const Image& page, const BBox& box, int k) {
  const auto matches = rank(page, box);
  if (matches.empty() || matches.front().similarity < config_.min_similarity) return {};
  double z = 0;
  for (const auto& m : matches) z += std::exp((m.similarity - matches.front().similarity) / config_.temperature);
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < matches.size() && i < static_cast<std::size_t>(k); ++i) {
    const double p = std::exp((matches[i].similarity - matches.front().similarity) / config_.temperature) / z;
    out.push_back({matches[i].label, p});
  }
  return out;
}

std::optional<std::string> TemplateOcr::read(const Image& page, const BBox& box) {
  const auto matches = rank(page, box);
  if (matches.empty() || matches.front().similarity < config_.min_similarity) return std::nullopt;
  return matches.front().label;
}

}  // namespace docrestore::adapters
