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
#include <memory>
#include <string>

#include "docrestore/pipeline/pipeline.h"

namespace docrestore::service {

inline constexpr const char* kTokenHeader = "X-Review-Token";

struct Request {
  std::string method;  // GET, POST, PATCH
  std::string path;    // without query string
  std::map<std::string, std::string> headers;
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// HTTP interface for reviewing and editing jobs.
//
//   GET  /jobs                          list jobs
//   POST /jobs                          {"image": base64 PNG, "annotation", "id"?, "run"?}
//   GET  /jobs/{id}                     job status and version
//   GET  /jobs/{id}/stages/{n}          stage artifact or "not yet computed"
//   POST|PATCH /jobs/{id}/stages/1/edits  {"boxes": [...], "base_version"?}
//   POST|PATCH /jobs/{id}/stages/2/edits  {"selections": [...], "base_version"?}
//   POST /jobs/{id}/rerun               resume pending stages
//   GET  /jobs/{id}/images/{page|restored|content}   image/png
//
// Every request must carry the shared token in X-Review-Token.
class ReviewService {
 public:
  ReviewService(pipeline::Engine& engine, std::string token);
  ~ReviewService();

  // Transport-independent dispatch.
  Response handle(const Request& request);

  // Binds host:port (port 0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  // Serves until stop(); call after bind().
  void serve();
  void stop();

 private:
  struct Server;
  pipeline::Engine& engine_;
  std::string token_;
  std::unique_ptr<Server> server_;
};

}  // namespace docrestore::service
