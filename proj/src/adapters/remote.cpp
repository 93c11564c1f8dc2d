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


#include "docrestore/adapters/remote.h"

#include <regex>
#include <set>
#include <thread>

#include <httplib.h>

#include "docrestore/adapters/stubs.h"
#include "docrestore/adapters/wire.h"

namespace docrestore::adapters {

namespace {

struct SlotGuard {
  std::counting_semaphore<1024>& sem;
  explicit SlotGuard(std::counting_semaphore<1024>& s) : sem(s) { sem.acquire(); }
  ~SlotGuard() { sem.release(); }
};

nlohmann::json box_json(const BBox& b) { return {b.x_min, b.y_min, b.x_max, b.y_max}; }

const nlohmann::json& require(const nlohmann::json& body, const char* key, const std::string& path) {
  if (!body.is_object() || !body.contains(key)) {
    throw MalformedResponseError(path + ": response missing '" + key + "'");
  }
  return body.at(key);
}

}  // namespace

void RemoteConfig::validate() const {
  if (endpoint.empty()) throw ContractError("remote endpoint is empty");
  if (timeout_ms <= 0) throw ContractError("remote timeout_ms must be > 0");
  if (retries < 0) throw ContractError("remote retries must be >= 0");
  if (max_in_flight < 1 || max_in_flight > 1024) throw ContractError("remote max_in_flight must be in [1, 1024]");
  if (ocr_margin < 0) throw ContractError("remote ocr_margin must be >= 0");
}

RemoteClient::RemoteClient(RemoteConfig config)
    : config_(std::move(config)), in_flight_(1) {
  config_.validate();
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, url)) {
    throw ContractError("remote endpoint must look like http://host:port[/prefix]: " + config_.endpoint);
  }
  scheme_host_port_ = m.str(1);
  prefix_ = m.str(2);
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  for (int i = 1; i < config_.max_in_flight; ++i) in_flight_.release();
}

nlohmann::json RemoteClient::post(const std::string& path, const nlohmann::json& body) {
  SlotGuard guard(in_flight_);
  const std::string payload = body.dump();
  const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(prefix_ + path, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ContractViolationError(path + ": HTTP " + std::to_string(res->status) + " " + res->body);
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedResponseError(path + ": response is not JSON: " + e.what());
    }
  }
  throw TimeoutError(path + ": no response after " + std::to_string(config_.retries + 1) +
                     " attempt(s): " + last_error);
}

std::vector<Candidate> RemoteOcr::recognize(const Image& page, const BBox& box, int k) {
  const int m = client_.config().ocr_margin;
  const PixelRect tight = to_pixels(box, page.width(), page.height());
  if (tight.empty()) throw ContractError("OCR box lies outside the page");
  const PixelRect crop{std::max(0, tight.x0 - m), std::max(0, tight.y0 - m),
                       std::min(page.width(), tight.x1 + m), std::min(page.height(), tight.y1 + m)};
  const BBox local{box.x_min - crop.x0, box.y_min - crop.y0, box.x_max - crop.x0, box.y_max - crop.y0};
  const auto body = client_.post("/ocr", {{"image", raster_to_json(page.crop(crop))},
                                         {"box", box_json(local)},
                                         {"k", k}});
  std::vector<Candidate> out;
  try {
    out = candidates_from_json(require(body, "candidates", "/ocr"), "candidates");
  } catch (const ParseError& e) {
    throw ContractViolationError(std::string("/ocr: ") + e.what());
  }
  if (auto v = candidate_contract_violation(out, k); !v.empty()) throw ContractViolationError("/ocr: " + v);
  return out;
}

LmResponse RemoteLm::predict(const LmRequest& request) {
  const auto body = client_.post("/lm", {{"context", request.context}, {"k", request.k}});
  const auto& preds = require(body, "predictions", "/lm");
  if (!preds.is_object()) throw ContractViolationError("/lm: predictions must be an object");
  std::set<int> asked;
  for (const auto& t : tokenize_context(request.context)) {
    if (t.slot > 0) asked.insert(t.slot);
  }
  LmResponse out;
  for (const auto& [key, value] : preds.items()) {
    int slot = 0;
    try {
      std::size_t used = 0;
      slot = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ContractViolationError("/lm: slot key '" + key + "' is not an integer");
    }
    if (!asked.count(slot)) throw ContractViolationError("/lm: prediction for unknown slot " + key);
    try {
      out[slot] = candidates_from_json(value, "predictions." + key);
    } catch (const ParseError& e) {
      throw ContractViolationError(std::string("/lm: ") + e.what());
    }
    if (auto v = candidate_contract_violation(out[slot], request.k); !v.empty()) {
      throw ContractViolationError("/lm: slot " + key + ": " + v);
    }
  }
  return out;
}

Image RemoteInpaint::inpaint(const InpaintRequest& request) {
  check_inpaint_shapes(request);
  auto regions = nlohmann::json::array();
  for (const auto& r : request.ignore_regions) regions.push_back(box_json(r));
  const auto body = client_.post("/inpaint", {{"damaged", raster_to_json(request.damaged)},
                                             {"content", raster_to_json(request.content)},
                                             {"mask", raster_to_json(request.mask)},
                                             {"ignore_regions", regions}});
  Image out;
  try {
    out = raster_from_json(require(body, "image", "/inpaint"), "image");
  } catch (const ParseError& e) {
    throw ContractViolationError(std::string("/inpaint: ") + e.what());
  }
  if (!out.same_shape(request.damaged)) {
    throw ContractViolationError("/inpaint: returned patch shape differs from x_d");
  }
  return out;
}

}  // namespace docrestore::adapters
