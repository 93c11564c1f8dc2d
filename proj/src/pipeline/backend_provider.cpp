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


#include "docrestore/pipeline/backend_provider.h"

#include "docrestore/core/rng.h"

namespace docrestore::pipeline {

std::vector<adapters::OracleChar> oracle_chars(const AnnotationDoc& doc) {
  std::vector<adapters::OracleChar> out;
  for (std::size_t i = 0; i < doc.page.chars.size(); ++i) {
    const CharTruth truth = i < doc.char_truth.size() ? doc.char_truth[i] : CharTruth{};
    if (!truth.gt_label) continue;
    out.push_back({doc.page.chars[i].box(), *truth.gt_label, truth.grade});
  }
  return out;
}

std::vector<std::optional<std::string>> transcript_for(const AnnotationDoc& doc,
                                                       std::span<const ReadingPosition> order,
                                                       double match_iou) {
  const auto oracle = oracle_chars(doc);
  std::vector<std::optional<std::string>> out;
  out.reserve(order.size());
  for (const auto& pos : order) {
    std::optional<std::string> label;
    double best = match_iou;
    for (const auto& o : oracle) {
      const double v = iou(o.box, pos.box);
      if (v >= best && (!label || v > best)) {
        best = v;
        label = o.label;
      }
    }
    out.push_back(label);
  }
  return out;
}

DefaultBackendProvider::DefaultBackendProvider(const PipelineConfig& config, std::vector<std::string> alphabet)
    : config_(config), alphabet_(std::move(alphabet)) {
  if (config_.ocr.kind == BackendKind::kRemote) remote_ocr_ = std::make_shared<adapters::RemoteOcr>(config_.ocr.remote);
  if (config_.lm.kind == BackendKind::kRemote) remote_lm_ = std::make_shared<adapters::RemoteLm>(config_.lm.remote);
  if (config_.inpaint.kind == BackendKind::kRemote) {
    inpaint_ = std::make_shared<adapters::RemoteInpaint>(config_.inpaint.remote);
  } else {
    inpaint_ = std::make_shared<adapters::StubInpaint>(config_.inpaint.mode,
                                                       static_cast<std::uint8_t>(config_.inpaint.stamp_value));
  }
}

std::shared_ptr<OcrBackend> DefaultBackendProvider::ocr(const AnnotationDoc& input, std::uint64_t seed) {
  if (remote_ocr_) return remote_ocr_;
  adapters::StubOcrConfig c;
  c.oracle = oracle_chars(input);
  c.alphabet = alphabet_;
  c.clean = config_.ocr.stub.clean;
  c.light = config_.ocr.stub.light;
  c.medium = config_.ocr.stub.medium;
  c.severe = config_.ocr.stub.severe;
  c.match_iou = config_.ocr.stub.match_iou;
  c.seed = seed;
  return std::make_shared<adapters::StubOcr>(std::move(c));
}

std::shared_ptr<LmBackend> DefaultBackendProvider::lm(const AnnotationDoc& input,
                                                      std::span<const ReadingPosition> order,
                                                      std::uint64_t seed) {
  if (remote_lm_) return remote_lm_;
  adapters::StubLmConfig c;
  c.transcript = transcript_for(input, order, config_.ocr.stub.match_iou);
  c.decoys = alphabet_;
  c.top1_accuracy = config_.lm.stub.top1_accuracy;
  c.top5_inclusion = config_.lm.stub.top5_inclusion;
  c.hit_prob_lo = config_.lm.stub.hit_prob_lo;
  c.hit_prob_hi = config_.lm.stub.hit_prob_hi;
  c.seed = mix_seed(seed, "lm");
  return std::make_shared<adapters::StubLm>(std::move(c));
}

std::shared_ptr<InpaintBackend> DefaultBackendProvider::inpaint() { return inpaint_; }

}  // namespace docrestore::pipeline
