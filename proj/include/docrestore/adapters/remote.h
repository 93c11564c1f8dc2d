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
#include <semaphore>
#include <string>

#include <nlohmann/json.hpp>

#include "docrestore/core/backends.h"

namespace docrestore::adapters {

// Transport failure (timeout or unreachable endpoint) after all retries.
class TimeoutError : public BackendError {
 public:
  using BackendError::BackendError;
};

// Response body is not valid JSON or lacks required fields.
class MalformedResponseError : public BackendError {
 public:
  using BackendError::BackendError;
};

// Response parses but breaks the backend contract (wrong shape, bad
// probabilities, unexpected slots).
class ContractViolationError : public BackendError {
 public:
  using BackendError::BackendError;
};

struct RemoteConfig {
  std::string endpoint;  // e.g. "http://127.0.0.1:9000" or with a path prefix
  int timeout_ms = 10000;
  int retries = 2;        // extra attempts after the first
  int max_in_flight = 4;  // concurrent requests per adapter
  int ocr_margin = 8;     // context pixels sent around an OCR box

  void validate() const;
};

// JSON-over-HTTP client shared by the remote adapters. POSTs to
// endpoint + path, retrying transport failures and 5xx responses.
class RemoteClient {
 public:
  explicit RemoteClient(RemoteConfig config);
  nlohmann::json post(const std::string& path, const nlohmann::json& body);
  const RemoteConfig& config() const { return config_; }

 private:
  RemoteConfig config_;
  std::string scheme_host_port_;
  std::string prefix_;
  std::counting_semaphore<1024> in_flight_;
};

// POST /ocr {"image": raster crop, "box": [x0,y0,x1,y1] in crop coords, "k"}
//   -> {"candidates": [[label, p], ...]}
class RemoteOcr : public OcrBackend {
 public:
  explicit RemoteOcr(RemoteConfig config) : client_(std::move(config)) {}
  std::vector<Candidate> recognize(const Image& page, const BBox& box, int k) override;

 private:
  RemoteClient client_;
};

// POST /lm {"context", "k"} -> {"predictions": {"<slot>": [[label, p], ...]}}
class RemoteLm : public LmBackend {
 public:
  explicit RemoteLm(RemoteConfig config) : client_(std::move(config)) {}
  LmResponse predict(const LmRequest& request) override;

 private:
  RemoteClient client_;
};

// POST /inpaint {"damaged", "content", "mask": rasters, "ignore_regions"}
//   -> {"image": raster}
class RemoteInpaint : public InpaintBackend {
 public:
  explicit RemoteInpaint(RemoteConfig config) : client_(std::move(config)) {}
  Image inpaint(const InpaintRequest& request) override;

 private:
  RemoteClient client_;
};

}  // namespace docrestore::adapters
