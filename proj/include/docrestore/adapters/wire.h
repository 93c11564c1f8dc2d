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

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "docrestore/core/backends.h"

namespace docrestore::adapters {

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws ParseError on invalid input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

// Raster payload: {"width", "height", "channels", "data": base64 of the
// row-major interleaved bytes}.
nlohmann::json raster_to_json(const Image& image);
Image raster_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json candidates_to_json(const std::vector<Candidate>& candidates);
// Parses [[label, p], ...]; shape errors raise ParseError.
std::vector<Candidate> candidates_from_json(const nlohmann::json& j, const std::string& field);

// Contract checks for a backend's candidate list: at most k entries, each
// probability in [0, 1], non-increasing. Returns the first violation or "".
std::string candidate_contract_violation(const std::vector<Candidate>& candidates, int k);

}  // namespace docrestore::adapters
