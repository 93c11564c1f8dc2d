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

#include <map>
#include <string>
#include <vector>

#include "docrestore/core/image.h"
#include "docrestore/core/errors.h"
#include "docrestore/core/types.h"

namespace docrestore {

// Raised by backend implementations; pipeline code treats it as a per-call
// failure.
class BackendError : public Error {
 public:
  using Error::Error;
};

class OcrBackend {
 public:
  virtual ~OcrBackend() = default;
  // Top-k candidates for the character inside `box` on `page`, sorted by
  // descending probability, probabilities in [0, 1].
  virtual std::vector<Candidate> recognize(const Image& page, const BBox& box, int k) = 0;
};

// Masked text with literal "[mask1]".."[maskN]" markers.
struct LmRequest {
  std::string context;
  int k = 5;
};

// Slot index (1-based) -> Top-k candidates.
using LmResponse = std::map<int, std::vector<Candidate>>;

class LmBackend {
 public:
  virtual ~LmBackend() = default;
  virtual LmResponse predict(const LmRequest& request) = 0;
};

struct InpaintRequest {
  Image damaged;  // x_d, page channels
  Image content;  // x_c, 1 channel, 255 blank / 0 ink
  Image mask;     // x_m, 1 channel, 1 = restore
  // Window-local regions of characters cut by the window edge; the backend
  // must leave them alone.
  std::vector<BBox> ignore_regions;
};

class InpaintBackend {
 public:
  virtual ~InpaintBackend() = default;
  // Returns a patch with the dimensions and channels of request.damaged.
  virtual Image inpaint(const InpaintRequest& request) = 0;
};

}  // namespace docrestore
