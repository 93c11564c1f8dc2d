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

#include <string>
#include <string_view>
#include <vector>

namespace docrestore {

// Splits UTF-8 text into code points, each kept as its own byte string.
// Invalid lead bytes are passed through as single-byte tokens.
std::vector<std::string> split_code_points(std::string_view text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = "");

}  // namespace docrestore
