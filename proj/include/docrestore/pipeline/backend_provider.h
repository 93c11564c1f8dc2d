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

#include <memory>
#include <span>

#include "docrestore/core/backends.h"
#include "docrestore/pipeline/config.h"

namespace docrestore::pipeline {

// Supplies backends for one page. Stub backends read their oracle from the
// page's input annotation (gt labels and grades); remote backends ignore it
// and are shared across pages so their in-flight limit is global.
class BackendProvider {
 public:
  virtual ~BackendProvider() = default;
  virtual std::shared_ptr<OcrBackend> ocr(const AnnotationDoc& input, std::uint64_t seed) = 0;
  // `order` is the reading order whose positions the LM context follows.
  virtual std::shared_ptr<LmBackend> lm(const AnnotationDoc& input, std::span<const ReadingPosition> order,
                                        std::uint64_t seed) = 0;
  virtual std::shared_ptr<InpaintBackend> inpaint() = 0;
};

class DefaultBackendProvider : public BackendProvider {
 public:
  DefaultBackendProvider(const PipelineConfig& config, std::vector<std::string> alphabet);

  std::shared_ptr<OcrBackend> ocr(const AnnotationDoc& input, std::uint64_t seed) override;
  std::shared_ptr<LmBackend> lm(const AnnotationDoc& input, std::span<const ReadingPosition> order,
                                std::uint64_t seed) override;
  std::shared_ptr<InpaintBackend> inpaint() override;

 private:
  PipelineConfig config_;
  std::vector<std::string> alphabet_;
  std::shared_ptr<OcrBackend> remote_ocr_;
  std::shared_ptr<LmBackend> remote_lm_;
  std::shared_ptr<InpaintBackend> inpaint_;
};

// Oracle characters: annotated chars that carry a gt label.
std::vector<adapters::OracleChar> oracle_chars(const AnnotationDoc& doc);

// Truth per reading position: the gt label of the annotated char matching
// each position's box at IoU >= match_iou.
std::vector<std::optional<std::string>> transcript_for(const AnnotationDoc& doc,
                                                       std::span<const ReadingPosition> order,
                                                       double match_iou = 0.5);

}  // namespace docrestore::pipeline
