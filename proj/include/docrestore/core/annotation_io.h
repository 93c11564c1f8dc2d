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

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "docrestore/core/types.h"

namespace docrestore {

inline constexpr int kAnnotationSchemaVersion = 1;

enum class ViolationKind {
  kDegenerateBox,
  kNegativeCoordinate,
  kOutOfBounds,
  kUnsortedCandidates,
  kDuplicateLabel,
  kProbabilityRange,
  kBadReference,
  kDuplicateReference,
  kBadImage,
};

struct Violation {
  ViolationKind kind;
  std::string field;
  std::string message;
};

std::string_view to_string(ViolationKind kind);

// Checks every type invariant; an empty result means the page is valid.
std::vector<Violation> validate_page(const PageDocument& doc);

nlohmann::json to_json(const BBox& box);
BBox box_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json to_json(const AnnotationDoc& doc);
// Throws ParseError (naming the field) on malformed input and
// ValidationError when the parsed document breaks an invariant.
AnnotationDoc annotation_from_json(const nlohmann::json& j);

AnnotationDoc read_annotation(const std::filesystem::path& path);
void write_annotation(const AnnotationDoc& doc, const std::filesystem::path& path);

// Annotation with no ground truth.
AnnotationDoc make_annotation(PageDocument page);

// Unique temp path next to `path`, for write-then-rename publication.
std::filesystem::path temp_sibling(const std::filesystem::path& path);

// Writes to a sibling temp file then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace docrestore
