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


#include "docrestore/service/review_service.h"

#include <regex>

#include <httplib.h>

#include "docrestore/adapters/wire.h"
#include "docrestore/core/errors.h"

namespace docrestore::service {

using nlohmann::json;
using pipeline::RestorationJob;

struct ReviewService::Server {
  httplib::Server http;
};

namespace {

Response json_response(int status, const json& body) { return {status, "application/json", body.dump(2)}; }

Response error_response(int status, const std::string& message, const std::string& field = {}) {
  json body = {{"error", message}};
  if (!field.empty()) body["field"] = field;
  return json_response(status, body);
}

json job_summary(const RestorationJob& job) {
  json stages = json::array();
  for (std::size_t i = 0; i < job.stages.size(); ++i) {
    const auto& s = job.stages[i];
    stages.push_back({{"stage", i + 1}, {"status", to_string(s.status)}, {"error", s.error}, {"updated_at", s.updated_at}});
  }
  json selections = json::array();
  for (const auto& s : job.selections) {
    json e = {{"slot", s.slot}, {"label", s.label}, {"free_text", s.free_text}};
    if (s.rank) e["rank"] = *s.rank;
    selections.push_back(e);
  }
  return {{"id", job.id},
          {"version", job.version},
          {"page", {{"width", job.page.width}, {"height", job.page.height}, {"url", "/jobs/" + job.id + "/images/page"}}},
          {"stages", stages},
          {"selections", selections},
          {"box_edits", job.box_edits},
          {"created_at", job.created_at},
          {"updated_at", job.updated_at}};
}

std::optional<std::uint64_t> base_version(const json& body) {
  if (!body.contains("base_version") || body["base_version"].is_null()) return std::nullopt;
  if (!body["base_version"].is_number_unsigned()) throw ValidationError("base_version", "expected a non-negative integer");
  return body["base_version"].get<std::uint64_t>();
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw ValidationError("$", std::string("body is not valid JSON: ") + e.what());
  }
}

json overlay(const pipeline::Stage1Artifact& s1) {
  json damage = json::array();
  for (std::size_t i = 0; i < s1.page.damage_boxes.size(); ++i) {
    const auto& d = s1.page.damage_boxes[i];
    damage.push_back({{"index", i}, {"box", to_json(d.box)}, {"grade", d.grade ? json(to_string(*d.grade)) : json(nullptr)}});
  }
  json legible = json::array();
  for (std::size_t i = 0; i < s1.page.chars.size(); ++i) {
    legible.push_back({{"index", i}, {"box", to_json(s1.page.chars[i].box())}, {"label", s1.page.chars[i].top_label()}});
  }
  return {{"damage", damage}, {"legible", legible}};
}

}  // namespace

ReviewService::ReviewService(pipeline::Engine& engine, std::string token)
    : engine_(engine), token_(std::move(token)), server_(std::make_unique<Server>()) {
  if (token_.empty()) throw ContractError("review service needs a non-empty token");
  server_->http.set_payload_max_length(64 * 1024 * 1024);
  auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
    Request r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.headers) r.headers[k] = v;
    const Response out = handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  const std::string any = R"(/.*)";
  server_->http.Get(any, bridge);
  server_->http.Post(any, bridge);
  server_->http.Patch(any, bridge);
}

ReviewService::~ReviewService() { stop(); }

int ReviewService::bind(const std::string& host, int port) {
  if (port == 0) return server_->http.bind_to_any_port(host);
  if (!server_->http.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ReviewService::serve() { server_->http.listen_after_bind(); }

void ReviewService::stop() {
  if (server_) server_->http.stop();
}

Response ReviewService::handle(const Request& request) {
  static const std::regex jobs_re(R"(^/jobs/?$)");
  static const std::regex job_re(R"(^/jobs/([^/]+)/?$)");
  static const std::regex stage_re(R"(^/jobs/([^/]+)/stages/([0-9]+)/?$)");
  static const std::regex edits_re(R"(^/jobs/([^/]+)/stages/([0-9]+)/edits/?$)");
  static const std::regex rerun_re(R"(^/jobs/([^/]+)/rerun/?$)");
  static const std::regex image_re(R"(^/jobs/([^/]+)/images/([a-z]+)/?$)");

  auto token = request.headers.find(kTokenHeader);
  if (token == request.headers.end() || token->second != token_) {
    return error_response(401, "missing or invalid " + std::string(kTokenHeader));
  }

  auto& store = engine_.store();
  const std::string& m = request.method;
  std::smatch match;
  try {
    if (std::regex_match(request.path, match, jobs_re)) {
      if (m == "GET") {
        json jobs = json::array();
        for (const auto& id : store.list()) jobs.push_back(job_summary(store.load(id)));
        return json_response(200, {{"jobs", jobs}});
      }
      if (m == "POST") {
        const json body = parse_body(request.body);
        if (!body.is_object()) throw ValidationError("$", "expected an object");
        if (!body.contains("image") || !body["image"].is_string()) throw ValidationError("image", "expected base64 PNG");
        Image page;
        try {
          page = decode_png(adapters::base64_decode(body["image"].get<std::string>()));
        } catch (const std::exception& e) {
          throw ValidationError("image", e.what());
        }
        if (!body.contains("annotation")) throw ValidationError("annotation", "missing annotation");
        AnnotationDoc input;
        try {
          input = annotation_from_json(body["annotation"]);
        } catch (const ParseError& e) {
          throw ValidationError("annotation." + e.field(), e.what());
        } catch (const ValidationError& e) {
          throw ValidationError("annotation." + e.field(), e.what());
        }
        if (input.page.image.width != page.width() || input.page.image.height != page.height()) {
          throw ValidationError("annotation.image", "dimensions differ from the submitted image");
        }
        std::optional<std::string> id;
        if (body.contains("id")) {
          if (!body["id"].is_string()) throw ValidationError("id", "expected a string");
          id = body["id"].get<std::string>();
        }
        const bool run = body.value("run", true);
        const std::uint64_t seed = body.value("seed", engine_.config().seed);
        RestorationJob job = store.create(page, input, pipeline::to_json(engine_.config()), seed, id);
        if (run) job = engine_.resume_job(job.id);
        return json_response(201, job_summary(job));
      }
      return error_response(405, "method not allowed");
    }
    if (std::regex_match(request.path, match, job_re)) {
      if (m != "GET") return error_response(405, "method not allowed");
      return json_response(200, job_summary(store.load(match[1])));
    }
    if (std::regex_match(request.path, match, stage_re)) {
      if (m != "GET") return error_response(405, "method not allowed");
      const std::string id = match[1];
      const int n = std::stoi(match[2]);
      const RestorationJob job = store.load(id);
      if (n < 1 || n > pipeline::kStageCount) throw NotFoundError("no stage " + std::to_string(n));
      const auto status = job.stage(n).status;
      json out = {{"job", id}, {"stage", n}, {"status", to_string(status)}, {"version", job.version},
                  {"error", job.stage(n).error}};
      std::optional<json> art;
      if (pipeline::is_settled(status)) art = store.read_json(id, pipeline::artifact::stage(n));
      if (!art) {
        out["computed"] = false;
        out["artifact"] = nullptr;
        out["message"] = "not yet computed";
        return json_response(200, out);
      }
      out["computed"] = true;
      if (n == 1) (*art)["overlay"] = overlay(pipeline::stage1_from_json(*art));
      if (n == 3) {
        (*art)["images"] = {{"restored", "/jobs/" + id + "/images/restored"}, {"content", "/jobs/" + id + "/images/content"}};
      }
      out["artifact"] = *art;
      return json_response(200, out);
    }
    if (std::regex_match(request.path, match, edits_re)) {
      if (m != "POST" && m != "PATCH") return error_response(405, "method not allowed");
      const std::string id = match[1];
      const int n = std::stoi(match[2]);
      store.load(id);  // 404 before body validation
      const json body = parse_body(request.body);
      pipeline::EditOutcome outcome;
      if (n == 1) {
        outcome = pipeline::apply_box_edits(engine_, id, pipeline::parse_box_edits(body), base_version(body));
      } else if (n == 2) {
        outcome = pipeline::apply_selections(engine_, id, pipeline::parse_selections(body), base_version(body));
      } else {
        throw ValidationError("stage", "only stages 1 and 2 accept edits");
      }
      return json_response(200, {{"version", outcome.job.version}, {"conflict", outcome.conflict}, {"job", job_summary(outcome.job)}});
    }
    if (std::regex_match(request.path, match, rerun_re)) {
      if (m != "POST") return error_response(405, "method not allowed");
      const std::string id = match[1];
      store.load(id);
      return json_response(200, job_summary(engine_.resume_job(id)));
    }
    if (std::regex_match(request.path, match, image_re)) {
      if (m != "GET") return error_response(405, "method not allowed");
      const std::string id = match[1];
      const std::string name = match[2];
      store.load(id);
      std::string file;
      if (name == "page") {
        file = pipeline::artifact::kPage;
      } else if (name == "restored") {
        file = pipeline::artifact::kRestored;
      } else if (name == "content") {
        file = pipeline::artifact::kContent;
      } else {
        throw NotFoundError("no image '" + name + "'");
      }
      std::string bytes;
      try {
        bytes = read_file(store.dir(id) / file);
      } catch (const Error&) {
        throw NotFoundError("image '" + name + "' not yet computed");
      }
      return {200, "image/png", std::move(bytes)};
    }
    return error_response(404, "no route for " + request.path);
  } catch (const NotFoundError& e) {
    return error_response(404, e.what());
  } catch (const ValidationError& e) {
    return error_response(400, e.what(), e.field());
  } catch (const ParseError& e) {
    return error_response(400, e.what(), e.field());
  } catch (const ContractError& e) {
    return error_response(409, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

}  // namespace docrestore::service
