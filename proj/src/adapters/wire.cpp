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


#include "docrestore/adapters/wire.h"

#include <array>

#include "docrestore/core/errors.h"

namespace docrestore::adapters {

namespace {
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}
}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i + 1 == bytes.size()) {
    const std::uint32_t v = bytes[i] << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw ParseError("data", "base64 length must be a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    std::array<int, 4> q{};
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = text[i + j];
      if (c == '=' && i + 4 == text.size() && j >= 2) {
        q[j] = 0;
        ++pad;
        continue;
      }
      if (pad > 0) throw ParseError("data", "invalid base64 padding");
      q[j] = decode_char(c);
      if (q[j] < 0) throw ParseError("data", "invalid base64 character");
    }
    const std::uint32_t v = (q[0] << 18) | (q[1] << 12) | (q[2] << 6) | q[3];
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

nlohmann::json raster_to_json(const Image& image) {
  return {{"width", image.width()},
          {"height", image.height()},
          {"channels", image.channels()},
          {"data", base64_encode(image.data())}};
}

Image raster_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_object()) throw ParseError(field, "expected raster object");
  for (const char* key : {"width", "height", "channels"}) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
      throw ParseError(field + "." + key, "expected integer");
    }
  }
  if (!j.contains("data") || !j["data"].is_string()) throw ParseError(field + ".data", "expected string");
  const int w = j["width"].get<int>();
  const int h = j["height"].get<int>();
  const int c = j["channels"].get<int>();
  if (w <= 0 || h <= 0 || (c != 1 && c != 3)) throw ParseError(field, "invalid raster dimensions");
  std::vector<std::uint8_t> bytes;
  try {
    bytes = base64_decode(j["data"].get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(field + ".data", e.what());
  }
  Image img(w, h, c);
  if (bytes.size() != img.data().size()) throw ParseError(field + ".data", "byte count does not match dimensions");
  std::copy(bytes.begin(), bytes.end(), img.data().begin());
  return img;
}

nlohmann::json candidates_to_json(const std::vector<Candidate>& candidates) {
  auto arr = nlohmann::json::array();
  for (const auto& c : candidates) arr.push_back({c.label, c.prob});
  return arr;
}

std::vector<Candidate> candidates_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field, "expected array of [label, probability]");
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number()) {
      throw ParseError(f, "expected [label, probability]");
    }
    out.push_back({e[0].get<std::string>(), e[1].get<double>()});
  }
  return out;
}

std::string candidate_contract_violation(const std::vector<Candidate>& candidates, int k) {
  if (candidates.size() > static_cast<std::size_t>(std::max(k, 0))) {
    return "returned " + std::to_string(candidates.size()) + " candidates for k=" + std::to_string(k);
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double p = candidates[i].prob;
    if (!(p >= 0.0 && p <= 1.0)) return "probability out of [0,1] at rank " + std::to_string(i);
    if (i > 0 && p > candidates[i - 1].prob) return "probabilities not sorted at rank " + std::to_string(i);
    if (candidates[i].label.empty()) return "empty label at rank " + std::to_string(i);
  }
  return "";
}

}  // namespace docrestore::adapters
