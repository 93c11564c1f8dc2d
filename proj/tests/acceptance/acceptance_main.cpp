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


// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "docrestore/adapters/stubs.h"
#include "docrestore/core/glyph_atlas.h"
#include "docrestore/core/rng.h"
#include "docrestore/localization/fusion.h"
#include "docrestore/metrics/metrics.h"
#include "docrestore/pipeline/evaluate.h"
#include "docrestore/prediction/vlcp.h"
#include "docrestore/restoration/par.h"
#include "oracles/detection_oracle.h"
#include "oracles/fusion_oracle.h"
#include "oracles/levenshtein_oracle.h"
#include "oracles/vlcp_oracle.h"
#include "support/service_fixture.h"

namespace docrestore::acceptance {
namespace {

using nlohmann::json;

// Empty string means pass; anything else is the failure detail.
using Outcome = std::string;

struct Criterion {
  std::string name;
  double time_limit_s;  // 0 = untimed
  std::function<Outcome(std::ostream&)> run;
};

template <typename... Args>
std::string cat(const Args&... args) {
  std::ostringstream s;
  (s << ... << args);
  return s.str();
}

BBox random_box(Rng& rng, double extent, double max_side) {
  const double x = static_cast<double>(rng.below(static_cast<std::uint64_t>(extent)));
  const double y = static_cast<double>(rng.below(static_cast<std::uint64_t>(extent)));
  return {x, y, x + 1 + static_cast<double>(rng.below(static_cast<std::uint64_t>(max_side))),
          y + 1 + static_cast<double>(rng.below(static_cast<std::uint64_t>(max_side)))};
}

// 1. Box fusion against the brute-force evaluation.
Outcome fusion_matches_oracle(std::ostream& log) {
  Rng rng(1001);
  const localization::FusionParams params;
  std::size_t boundary_cases = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<CharObservation> chars;
    std::vector<BBox> ocr_low;
    for (std::uint64_t n = rng.below(12); n > 0; --n) {
      const BBox b = random_box(rng, 80, 25);
      // Confidences on a 0.05 grid so the 0.1 gate is hit exactly.
      const double conf = static_cast<double>(rng.below(8)) * 0.05;
      chars.emplace_back(b, conf > 0 ? std::vector<Candidate>{{"x", conf}} : std::vector<Candidate>{});
      if (conf < 0.1) ocr_low.push_back(b);
    }
    std::vector<BBox> detector;
    for (std::uint64_t n = rng.below(8); n > 0; --n) {
      if (!ocr_low.empty() && rng.bernoulli(0.3)) {
        // Half-height copy of an OCR box: overlap exactly 0.5.
        BBox b = ocr_low[rng.below(ocr_low.size())];
        b.y_max = b.y_min + 2 * (b.y_max - b.y_min);
        detector.push_back(b);
        ++boundary_cases;
      } else {
        detector.push_back(random_box(rng, 80, 25));
      }
    }
    const auto ambiguous = localization::collect_ambiguous(chars, params);
    if (ambiguous != ocr_low) return cat("config ", t, ": ambiguous set differs");
    const auto got = localization::fuse(ambiguous, detector, params);
    const auto want = oracle::fuse_brute_force(ocr_low, detector, 0.5);
    auto key = [](const BBox& b) { return std::tuple(b.x_min, b.y_min, b.x_max, b.y_max); };
    std::multiset<std::tuple<double, double, double, double>> gs, ws;
    for (const auto& b : got) gs.insert(key(b));
    for (const auto& b : want) ws.insert(key(b));
    if (gs != ws) return cat("config ", t, ": fused set differs (", got.size(), " vs ", want.size(), ")");
    if (got != want) return cat("config ", t, ": canonical order differs");
  }
  log << "1000 configurations, " << boundary_cases << " exact-0.5 overlaps";
  return {};
}

// 2. Composite scores, argmax, and the confidence shortcut.
Outcome vlcp_matches_oracle(std::ostream& log) {
  Rng rng(2002);
  const std::vector<std::string> pool{"甲", "乙", "丙", "丁", "戊", "己", "庚", "辛"};
  double worst = 0;
  std::size_t ties = 0;
  for (int t = 0; t < 10000; ++t) {
    prediction::VlcpParams p;
    if (t % 2 == 1) {
      p.k = static_cast<int>(rng.range(1, 6));
      p.w_o = rng.uniform();
      p.w_l = rng.uniform();
      p.alpha = rng.uniform(0, 0.2);
      p.beta = rng.uniform(1, 2);
    }
    auto draw = [&](bool coarse) {
      auto labels = pool;
      rng.shuffle(labels);
      std::vector<Candidate> c;
      for (std::uint64_t n = rng.below(static_cast<std::uint64_t>(p.k) + 2); n > 0; --n) {
        c.push_back({labels[n - 1], coarse ? static_cast<double>(rng.below(5)) * 0.1 : rng.uniform()});
      }
      return normalize_candidates(c);
    };
    const bool coarse = t % 3 == 0;
    const auto o = draw(coarse), l = draw(coarse);
    std::vector<std::pair<std::string, double>> oo, ll;
    for (const auto& c : o) oo.emplace_back(c.label, c.prob);
    for (const auto& c : l) ll.emplace_back(c.label, c.prob);
    const auto want = oracle::score_union(oo, ll, {p.w_o, p.w_l, p.alpha, p.beta, p.k});
    if (want.empty()) continue;
    const auto got = prediction::vlcp_select(o, l, p);
    if (got.size() != want.size()) return cat("set ", t, ": union size ", got.size(), " vs ", want.size());
    for (const auto& w : want) {
      auto it = std::find_if(got.begin(), got.end(), [&](const auto& g) { return g.label == w.label; });
      if (it == got.end()) return cat("set ", t, ": label missing");
      worst = std::max(worst, std::abs(it->composite - w.composite));
      if (std::abs(it->composite - w.composite) > 1e-9) return cat("set ", t, ": composite off by ", it->composite - w.composite);
    }
    if (got.size() > 1 && got[0].composite == got[1].composite) ++ties;
    if (got.front().label != oracle::argmax_label(want)) return cat("set ", t, ": argmax differs");
  }

  // Shortcut: slots whose OCR confidence exceeds tau never reach the LM.
  struct SlotLog : LmBackend {
    std::vector<std::string> contexts;
    int masks = 0;
    LmResponse predict(const LmRequest& r) override {
      contexts.push_back(r.context);
      LmResponse out;
      for (const auto& tok : adapters::tokenize_context(r.context)) {
        if (tok.slot > 0) {
          ++masks;
          out[tok.slot] = {{"甲", 0.5}};
        }
      }
      return out;
    }
  };
  struct ConfOcr : OcrBackend {
    std::map<double, double> conf;  // box x -> top confidence
    std::vector<Candidate> recognize(const Image&, const BBox& b, int) override { return {{"乙", conf.at(b.x_min)}}; }
  };
  int shortcut_total = 0;
  for (int page = 0; page < 200; ++page) {
    localization::MaskedText m;
    ConfOcr ocr;
    int expected_masks = 0;
    const int n = static_cast<int>(rng.range(1, 12));
    for (int s = 1; s <= n; ++s) {
      m.tokens.push_back({false, "丁", 0});
      m.tokens.push_back({true, {}, s});
      const double x = s * 10.0;
      m.slots.push_back({s, static_cast<std::size_t>(s - 1), m.tokens.size() - 1, {x, 0, x + 5, 5}});
      const double c = rng.bernoulli(0.5) ? rng.uniform(0.91, 1.0) : rng.uniform(0.0, 0.9);
      ocr.conf[x] = c;
      expected_masks += c > 0.9 ? 0 : 1;
    }
    SlotLog lm;
    const auto r = prediction::vlcp_predict(m, Image(1, 1, 1, 255), ocr, lm, {});
    const int calls = static_cast<int>(lm.contexts.size());
    if (calls != (expected_masks > 0 ? 1 : 0)) return cat("page ", page, ": ", calls, " LM calls");
    if (lm.masks != expected_masks) return cat("page ", page, ": LM saw ", lm.masks, " masks, wanted ", expected_masks);
    for (const auto& s : r.slots) {
      if (s.route == prediction::SlotRoute::kOcrShortcut) {
        ++shortcut_total;
        if (!s.lm_candidates.empty()) return cat("page ", page, ": shortcut slot has LM candidates");
      }
    }
  }
  log << "10000 sets, max |diff| " << worst << ", " << ties << " top ties; " << shortcut_total
      << " shortcut slots, 0 LM queries for them";
  return {};
}

// 3. Fused Top-1 beats each component on a grade-stratified stub corpus.
Outcome vlcp_dominance(std::ostream& log) {
  const auto alphabet = default_alphabet();
  Rng rng(3003);
  constexpr int kSlots = 500;
  adapters::StubOcrConfig oc;
  oc.alphabet = alphabet;
  oc.seed = 31;
  adapters::StubLmConfig lc;
  lc.decoys = alphabet;
  lc.top1_accuracy = 0.9;
  lc.seed = 32;

  localization::MaskedText masked;
  std::vector<std::string> truth;
  std::string all_masked;
  for (int s = 1; s <= kSlots; ++s) {
    const auto& ctx = alphabet[rng.below(alphabet.size())];
    const auto& label = alphabet[rng.below(alphabet.size())];
    masked.tokens.push_back({false, ctx, 0});
    masked.tokens.push_back({true, {}, s});
    lc.transcript.push_back(ctx);
    lc.transcript.push_back(label);
    const double x = (s % 40) * 50.0, y = (s / 40) * 50.0;
    const BBox box{x, y, x + 40, y + 40};
    masked.slots.push_back({s, static_cast<std::size_t>(s - 1), masked.tokens.size() - 1, box});
    static const DamageGrade grades[] = {DamageGrade::kLight, DamageGrade::kMedium, DamageGrade::kSevere};
    oc.oracle.push_back({box, label, grades[s % 3]});
    truth.push_back(label);
  }
  adapters::StubOcr ocr(oc);
  adapters::StubLm lm(lc);
  const auto result = prediction::vlcp_predict(masked, Image(1, 1, 1, 255), ocr, lm, {});

  // LM-only baseline: every slot masked, one call.
  adapters::StubLm lm_only(lc);
  const auto lm_out = lm_only.predict({masked.context(), 5});

  int ocr_hits = 0, lm_hits = 0, top1 = 0, top5 = 0;
  for (int i = 0; i < kSlots; ++i) {
    const auto& s = result.slots[static_cast<std::size_t>(i)];
    const auto& t = truth[static_cast<std::size_t>(i)];
    ocr_hits += !s.ocr_candidates.empty() && s.ocr_candidates[0].label == t;
    const auto it = lm_out.find(i + 1);
    lm_hits += it != lm_out.end() && !it->second.empty() && it->second[0].label == t;
    top1 += s.label == t;
    const auto five = s.top_labels(5);
    top5 += std::find(five.begin(), five.end(), t) != five.end();
  }
  auto pct = [](int n) { return 100.0 * n / kSlots; };
  log << "OCR-only " << pct(ocr_hits) << "%, LM-only " << pct(lm_hits) << "%, fused Top-1 " << pct(top1)
      << "%, Top-5 " << pct(top5) << "%";
  if (top1 < std::max(ocr_hits, lm_hits)) return "fused Top-1 below a component";
  if (top5 < top1) return "Top-5 below Top-1";
  return {};
}

// 4. AR edit counts equal the Levenshtein distance, exhaustively.
Outcome ar_exhaustive(std::ostream& log) {
  std::vector<std::vector<std::string>> strings{{}};
  for (std::size_t len = 1; len <= 6; ++len) {
    const std::size_t before = strings.size();
    for (std::size_t i = 0; i < before; ++i) {
      if (strings[i].size() != len - 1) continue;
      for (const char* c : {"a", "b", "c"}) {
        auto s = strings[i];
        s.push_back(c);
        strings.push_back(std::move(s));
      }
    }
  }
  std::size_t pairs = 0;
  for (const auto& ref : strings) {
    if (ref.empty()) continue;
    for (const auto& hyp : strings) {
      const auto r = metrics::ar(std::span<const std::string>(ref), std::span<const std::string>(hyp));
      const auto d = oracle::edit_distance(ref, hyp);
      if (r.errors() != d) return cat("pair #", pairs, ": D+S+I ", r.errors(), " vs ", d);
      ++pairs;
    }
  }
  const double a = metrics::ar("abcd", "abcd").ar, b = metrics::ar("abcd", "abed").ar, c = metrics::ar("abcd", "abcde").ar;
  if (a != 1.0 || b != 0.75 || c != 0.75) return cat("worked examples gave ", a, ", ", b, ", ", c);
  log << pairs << " pairs; examples 1.0/0.75/0.75";
  return {};
}

// 5. PAR plan and restoration invariants.
Outcome par_invariants(std::ostream& log) {
  Rng rng(5005);
  const auto atlas = GlyphAtlas::procedural(default_alphabet(), 16, 7);
  std::size_t total_boxes = 0, total_steps = 0;
  for (int t = 0; t < 200; ++t) {
    // Every tenth layout uses the default 448/224 geometry.
    const restoration::ParParams p = t % 10 == 0 ? restoration::ParParams{} : restoration::ParParams{64, 32};
    const int limit = p.max_box_side();
    const int w = static_cast<int>(rng.range(limit + 1, t % 10 == 0 ? 1200 : 320));
    const int h = static_cast<int>(rng.range(limit + 1, t % 10 == 0 ? 1200 : 320));
    std::vector<restoration::RestorationTarget> targets;
    std::vector<BBox> boxes;
    for (std::uint64_t n = rng.below(25); n > 0; --n) {
      const int bw = static_cast<int>(rng.range(1, limit)), bh = static_cast<int>(rng.range(1, limit));
      const int x = static_cast<int>(rng.range(0, w - bw)), y = static_cast<int>(rng.range(0, h - bh));
      const BBox b{double(x), double(y), double(x + bw), double(y + bh)};
      boxes.push_back(b);
      targets.push_back({b, default_alphabet()[rng.below(8)]});
    }
    const auto plan = restoration::plan_patches(w, h, boxes, p);
    std::vector<int> seen(boxes.size(), 0);
    for (std::size_t s = 0; s < plan.steps.size(); ++s) {
      const auto& st = plan.steps[s];
      const BBox win{double(st.window.x0), double(st.window.y0), double(st.window.x1), double(st.window.y1)};
      for (auto i : st.contained) {
        ++seen[i];
        if (!win.contains(boxes[i])) return cat("layout ", t, ": box ", i, " not inside its window");
        if (plan.assignment[i] != s) return cat("layout ", t, ": assignment mismatch");
      }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i] != 1) return cat("layout ", t, ": box ", i, " assigned ", seen[i], " times");
    }

    Image page(w, h, 3, 200);
    for (int k = 0; k < 40; ++k) page.at(static_cast<int>(rng.below(static_cast<std::uint64_t>(w))), static_cast<int>(rng.below(static_cast<std::uint64_t>(h))), 1) = 90;
    adapters::StubInpaint stamp(adapters::InpaintMode::kStamp, 3);
    const auto r1 = restoration::restore_page(page, targets, stamp, atlas, p);
    adapters::StubInpaint stamp2(adapters::InpaintMode::kStamp, 3);
    const auto r2 = restoration::restore_page(page, targets, stamp2, atlas, p);
    if (r1.restored != r2.restored || r1.plan != r2.plan) return cat("layout ", t, ": runs differ");
    if (r1.failure) return cat("layout ", t, ": step failed");
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        bool inside = false;
        for (const auto& b : boxes) inside = inside || (x >= b.x_min && x < b.x_max && y >= b.y_min && y < b.y_max);
        bool changed = false;
        for (int c = 0; c < 3; ++c) changed = changed || r1.restored.at(x, y, c) != page.at(x, y, c);
        if (changed != inside) return cat("layout ", t, ": pixel (", x, ",", y, ") changed=", changed, " inside=", inside);
      }
    }
    total_boxes += boxes.size();
    total_steps += plan.steps.size();
  }
  log << "200 layouts, " << total_boxes << " boxes, " << total_steps << " steps";
  return {};
}

// 6. End-to-end: restored pages read better than damaged ones.
Outcome end_to_end(std::ostream& log) {
  testing::TempDir dir;
  auto config = pipeline::default_config();
  config.output_dir = dir / "out";
  config.seed = 2024;
  const auto pages = pipeline::write_corpus(config, 20, dir / "corpus");
  const auto runs = pipeline::run_pipeline(config, pages);
  std::vector<pipeline::EvalPage> eval;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].ok) return cat("page ", runs[i].id, " failed: ", runs[i].error);
    eval.push_back({runs[i].id, pipeline::ground_truth_path(pages[i].annotation)});
  }
  pipeline::JobStore store(config.output_dir / "jobs");
  const auto report = pipeline::evaluate(config, store, eval);
  const auto& all = report.ar.at("all");
  if (!all.damaged || !all.restored) return "AR missing";
  const double gain = all.restored->ar - all.damaged->ar;
  log << "damaged AR " << 100 * all.damaged->ar << "%, restored AR " << 100 * all.restored->ar << "%, gain "
      << 100 * gain << " pp";
  if (gain < 0.20) return cat("gain ", 100 * gain, " pp below 20 pp");
  return {};
}

// 7. Detection matching against an independent greedy implementation.
Outcome detection_matches_oracle(std::ostream& log) {
  Rng rng(7007);
  for (int t = 0; t < 1000; ++t) {
    std::vector<BBox> gts, boxes;
    std::vector<double> conf;
    std::vector<metrics::ScoredBox> preds;
    for (std::uint64_t n = rng.below(9); n > 0; --n) gts.push_back(random_box(rng, 40, 15));
    for (std::uint64_t n = rng.below(9); n > 0; --n) {
      BBox b = random_box(rng, 40, 15);
      if (!gts.empty() && rng.bernoulli(0.5)) {
        b = gts[rng.below(gts.size())];
        b.x_max += static_cast<double>(rng.below(4));
      }
      boxes.push_back(b);
      conf.push_back(static_cast<double>(rng.below(5)) / 4);
      preds.push_back({b, conf.back()});
    }
    const auto got = metrics::detection_prf(preds, gts);
    const auto want = oracle::greedy_detection(boxes, conf, gts, 0.5);
    if (got.matches.size() != want.matched || got.precision != want.precision || got.recall != want.recall ||
        got.f1 != want.f1) {
      return cat("case ", t, ": P/R/F1 ", got.precision, "/", got.recall, "/", got.f1, " vs ", want.precision, "/",
                 want.recall, "/", want.f1);
    }
  }
  const std::vector<BBox> gt{{0, 0, 10, 10}, {50, 50, 60, 60}, {100, 0, 110, 10}};
  const std::vector<metrics::ScoredBox> pred{{{0, 0, 10, 6}, 0.9}, {{200, 200, 210, 210}, 0.8}};
  const auto r = metrics::detection_prf(pred, gt);
  if (std::abs(r.f1 - 0.4) > 1e-12) return cat("worked example F1 ", r.f1);
  log << "1000 cases; worked example P=0.5 R=0.333 F1=" << r.f1;
  return {};
}

// 8. Reading order on generated vertical pages.
Outcome reading_order_toy_pages(std::ostream& log) {
  const auto alphabet = default_alphabet();
  const auto atlas = GlyphAtlas::procedural(alphabet, 16, 7);
  Rng rng(8008);
  std::size_t positions = 0;
  for (int t = 0; t < 100; ++t) {
    synthesis::ToyPageSpec spec;
    spec.columns = static_cast<int>(rng.range(1, 8));
    spec.chars_per_column = static_cast<int>(rng.range(1, 12));
    const auto toy = synthesis::generate_toy_page(spec, atlas, rng.next_u64());
    // Turn some characters into damage boxes; the expected order follows.
    PageDocument page = toy.annotation.page;
    std::vector<CharObservation> kept;
    std::vector<ReadingPosition> expected;
    std::map<std::size_t, ReadingPosition> remap;
    for (std::size_t i = 0; i < page.chars.size(); ++i) {
      if (rng.bernoulli(0.25)) {
        remap[i] = {SlotKind::kDamaged, page.damage_boxes.size(), page.chars[i].box()};
        page.damage_boxes.push_back({page.chars[i].box(), DamageGrade::kSevere, std::nullopt});
      } else {
        remap[i] = {SlotKind::kLegible, kept.size(), page.chars[i].box()};
        kept.push_back(page.chars[i]);
      }
    }
    for (const auto& p : toy.annotation.page.reading_order) expected.push_back(remap.at(p.index));
    page.chars = kept;
    const auto got = localization::reading_order(page, localization::Layout::kVerticalRtl);
    if (got != expected) return cat("page ", t, " (", spec.columns, "x", spec.chars_per_column, ") order differs");
    positions += got.size();
  }
  log << "100 pages, " << positions << " positions";
  return {};
}

// 9. Overrides through the service API change only downstream artifacts.
Outcome override_semantics(std::ostream& log) {
  testing::ServiceHarness h;
  const auto id = h.submit_page(4);
  auto bytes = [&](const std::string& name) { return read_file(h.store().dir(id) / name); };
  auto get_stage = [&](int n) { return h.call("GET", "/jobs/" + id + "/stages/" + std::to_string(n)).body; };
  const auto page_png = bytes("page.png");
  const auto input_json = bytes("input.json");

  // Stage-2 selection.
  const auto s1_bytes = bytes("stage1.json");
  const json s2 = get_stage(2)["artifact"];
  const auto slot_count = s2["slot_count"].get<std::size_t>();
  if (slot_count == 0) return "corpus page has no slots";
  std::size_t pick = slot_count;
  for (std::size_t i = 0; i < slot_count; ++i) {
    if (s2["slots"][i]["ranked"].size() >= 2) {
      pick = i;
      break;
    }
  }
  if (pick == slot_count) return "no slot with two candidates";
  const int slot = s2["slots"][pick]["slot"];
  const std::string new_label = s2["slots"][pick]["ranked"][1]["label"];
  const auto content_before = decode_png(std::vector<std::uint8_t>(bytes("content.png").begin(), bytes("content.png").end()));
  auto r = h.call("POST", "/jobs/" + id + "/stages/2/edits", json{{"selections", {{{"slot", slot}, {"rank", 2}}}}});
  if (r.status != 200) return cat("selection edit: HTTP ", r.status, " ", r.raw);
  if (bytes("stage1.json") != s1_bytes) return "selection edit touched stage 1";
  if (get_stage(3)["computed"] != false) return "stage 3 still present after selection edit";
  const json s2_after = get_stage(2)["artifact"];
  if (s2_after["slot_count"] != slot_count) return "slot count changed by selection";
  for (std::size_t i = 0; i < slot_count; ++i) {
    const auto& a = s2["slots"][i];
    const auto& b = s2_after["slots"][i];
    if (i == pick) {
      if (b["label"] != new_label || b["source"] != "human") return "selected slot not overridden";
    } else if (a != b) {
      return cat("slot ", i, " changed by an edit to slot ", slot);
    }
  }
  const auto s2_bytes = bytes("stage2.json");
  r = h.call("POST", "/jobs/" + id + "/rerun");
  if (r.body["stages"][2]["status"] != "done") return "rerun did not finish stage 3";
  if (bytes("stage1.json") != s1_bytes || bytes("stage2.json") != s2_bytes) return "rerun mutated stages 1-2";
  const auto content_after = decode_png(std::vector<std::uint8_t>(bytes("content.png").begin(), bytes("content.png").end()));
  const auto box = s2["slots"][pick]["box"];
  const BBox sb{box[0], box[1], box[2], box[3]};
  const auto px = to_pixels(sb, content_after.width(), content_after.height());
  std::size_t inside = 0, outside = 0;
  for (int y = 0; y < content_after.height(); ++y) {
    for (int x = 0; x < content_after.width(); ++x) {
      if (content_after.at(x, y) == content_before.at(x, y)) continue;
      (x >= px.x0 && x < px.x1 && y >= px.y0 && y < px.y1 ? inside : outside)++;
    }
  }
  if (inside == 0 || outside != 0) return cat("content change inside/outside box: ", inside, "/", outside);

  // Stage-1 box edits: delete one, rerun, then add one on blank paper.
  const json s1 = get_stage(1)["artifact"];
  const auto boxes_before = s1["page"]["damage_boxes"].size();
  r = h.call("POST", "/jobs/" + id + "/stages/1/edits", json{{"boxes", {{{"op", "delete"}, {"index", 0}}}}});
  if (r.status != 200) return cat("box delete: HTTP ", r.status, " ", r.raw);
  if (r.body["job"]["stages"][0]["status"] != "overridden") return "stage 1 not overridden";
  if (r.body["job"]["selections"].size() != 0) return "selections survived a stage-1 edit";
  if (get_stage(2)["computed"] != false || get_stage(3)["computed"] != false) return "downstream stages not reset";
  const auto s1_edited = bytes("stage1.json");
  h.call("POST", "/jobs/" + id + "/rerun");
  if (bytes("stage1.json") != s1_edited) return "rerun mutated the edited stage 1";
  const auto after_delete = get_stage(2)["artifact"]["slot_count"].get<std::size_t>();
  if (after_delete != slot_count - 1) return cat("slot count after delete ", after_delete, ", wanted ", slot_count - 1);

  r = h.call("POST", "/jobs/" + id + "/stages/1/edits",
             json{{"boxes", {{{"op", "add"}, {"box", {2, 2, 18, 18}}, {"grade", "severe"}}}}});
  if (r.status != 200) return cat("box add: HTTP ", r.status, " ", r.raw);
  h.call("POST", "/jobs/" + id + "/rerun");
  const auto after_add = get_stage(2)["artifact"]["slot_count"].get<std::size_t>();
  if (after_add != slot_count) return cat("slot count after add ", after_add, ", wanted ", slot_count);
  const auto s3 = get_stage(3)["artifact"];
  if (s3["targets"].size() + s3["skipped_slots"].size() != after_add) return "stage 3 targets do not cover the slots";
  if (bytes("page.png") != page_png || bytes("input.json") != input_json) return "job inputs mutated";
  if (boxes_before != slot_count) return cat("stage-1 boxes ", boxes_before, " vs slots ", slot_count);
  log << slot_count << " slots; selection, delete and add each reran downstream only";
  return {};
}

}  // namespace
}  // namespace docrestore::acceptance

int main() {
  using namespace docrestore::acceptance;
  const std::vector<Criterion> criteria{
      {"fusion-vs-brute-force", 5, fusion_matches_oracle},
      {"vlcp-scores-argmax-shortcut", 0, vlcp_matches_oracle},
      {"vlcp-dominance", 10, vlcp_dominance},
      {"ar-exhaustive-levenshtein", 60, ar_exhaustive},
      {"par-invariants", 0, par_invariants},
      {"end-to-end-ar-gain", 300, end_to_end},
      {"detection-vs-greedy-oracle", 0, detection_matches_oracle},
      {"reading-order-toy-pages", 0, reading_order_toy_pages},
      {"override-semantics-service", 0, override_semantics},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::ostringstream detail;
    const auto start = std::chrono::steady_clock::now();
    std::string outcome;
    try {
      outcome = c.run(detail);
    } catch (const std::exception& e) {
      outcome = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.empty() && c.time_limit_s > 0 && secs >= c.time_limit_s) {
      outcome = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.time_limit_s) + " s";
    }
    const bool pass = outcome.empty();
    failures += pass ? 0 : 1;
    std::printf("%s %s (%.2f s): %s\n", pass ? "PASS" : "FAIL", c.name.c_str(), secs,
                pass ? detail.str().c_str() : outcome.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
