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


#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <regex>

#include <CLI11.hpp>

#include "docrestore/core/errors.h"
#include "docrestore/pipeline/corpus.h"
#include "docrestore/pipeline/evaluate.h"
#include "docrestore/pipeline/pipeline.h"
#include "docrestore/service/review_service.h"

namespace fs = std::filesystem;
using namespace docrestore;

namespace {

// Flags that mirror PipelineConfig fields; applied over the config file.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> layout;
  std::optional<double> tau, w_o, w_l, alpha, beta;
  std::optional<int> k, patch_size, stride;
  std::optional<double> conf_threshold, fusion_iou;
  std::optional<std::string> ocr_backend, lm_backend, inpaint_backend, inpaint_mode;
  std::optional<std::string> ocr_endpoint, lm_endpoint, inpaint_endpoint;
  std::optional<int> timeout_ms, retries;

  void add_to(CLI::App& app) {
    app.add_option("-c,--config", config_path, "Pipeline config file (JSON)");
    app.add_option("-o,--out", output_dir, "Output directory");
    app.add_option("--seed", seed, "Root seed");
    app.add_option("--workers", workers, "Pages processed in parallel");
    app.add_option("--layout", layout, "vertical-rtl or horizontal-ltr");
    app.add_option("--tau", tau, "OCR confidence shortcut threshold");
    app.add_option("--w-o", w_o, "OCR probability weight");
    app.add_option("--w-l", w_l, "LM probability weight");
    app.add_option("--alpha", alpha, "Rank score weight");
    app.add_option("--beta", beta, "Agreement multiplier");
    app.add_option("-k,--top-k", k, "Candidates per slot");
    app.add_option("--patch-size", patch_size, "Restoration window side");
    app.add_option("--stride", stride, "Window stride");
    app.add_option("--conf-threshold", conf_threshold, "OCR confidence below which a char is ambiguous");
    app.add_option("--fusion-iou", fusion_iou, "IoU above which an ambiguous box is dropped");
    app.add_option("--ocr-backend", ocr_backend, "stub or remote");
    app.add_option("--lm-backend", lm_backend, "stub or remote");
    app.add_option("--inpaint-backend", inpaint_backend, "stub or remote");
    app.add_option("--inpaint-mode", inpaint_mode, "Stub inpainter: blend, identity or stamp");
    app.add_option("--ocr-endpoint", ocr_endpoint, "Remote OCR base URL");
    app.add_option("--lm-endpoint", lm_endpoint, "Remote LM base URL");
    app.add_option("--inpaint-endpoint", inpaint_endpoint, "Remote inpainting base URL");
    app.add_option("--timeout-ms", timeout_ms, "Remote request timeout");
    app.add_option("--retries", retries, "Remote retries after the first attempt");
  }

  pipeline::PipelineConfig build() const {
    nlohmann::json j = config_path.empty() ? pipeline::to_json(pipeline::default_config())
                                           : nlohmann::json::parse(read_file(config_path));
    auto set = [&j](const std::vector<std::string>& path, const auto& value) {
      if (!value) return;
      nlohmann::json* node = &j;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) node = &(*node)[path[i]];
      (*node)[path.back()] = *value;
    };
    set({"output_dir"}, output_dir);
    set({"seed"}, seed);
    set({"workers"}, workers);
    set({"layout"}, layout);
    set({"vlcp", "tau"}, tau);
    set({"vlcp", "w_o"}, w_o);
    set({"vlcp", "w_l"}, w_l);
    set({"vlcp", "alpha"}, alpha);
    set({"vlcp", "beta"}, beta);
    set({"vlcp", "k"}, k);
    set({"par", "patch_size"}, patch_size);
    set({"par", "stride"}, stride);
    set({"fusion", "ocr_conf_threshold"}, conf_threshold);
    set({"fusion", "iou_threshold"}, fusion_iou);
    set({"ocr", "kind"}, ocr_backend);
    set({"lm", "kind"}, lm_backend);
    set({"inpaint", "kind"}, inpaint_backend);
    set({"inpaint", "mode"}, inpaint_mode);
    set({"ocr", "remote", "endpoint"}, ocr_endpoint);
    set({"lm", "remote", "endpoint"}, lm_endpoint);
    set({"inpaint", "remote", "endpoint"}, inpaint_endpoint);
    for (const char* b : {"ocr", "lm", "inpaint"}) {
      set({b, "remote", "timeout_ms"}, timeout_ms);
      set({b, "remote", "retries"}, retries);
    }
    auto config = pipeline::config_from_json(j);
    pipeline::apply_env_overrides(config);
    config.validate();
    return config;
  }
};

std::vector<pipeline::PageInput> corpus_inputs(const fs::path& dir) {
  static const std::regex input_name(R"(^(.+)\.json$)");
  std::vector<pipeline::PageInput> pages;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const std::string name = f.filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, input_name) || name.ends_with(".gt.json")) continue;
    const fs::path image = dir / (m.str(1) + ".png");
    if (fs::exists(image)) pages.push_back({image, f, m.str(1)});
  }
  return pages;
}

int cmd_synth(const ConfigFlags& flags, std::size_t pages, const fs::path& dir) {
  const auto config = flags.build();
  const auto inputs = pipeline::write_corpus(config, pages, dir);
  for (const auto& p : inputs) std::cout << p.image.string() << "\n";
  std::cout << inputs.size() << " page(s) written to " << dir.string() << "\n";
  return 0;
}

int cmd_restore(const ConfigFlags& flags, const std::vector<std::string>& page_args, const std::string& corpus) {
  const auto config = flags.build();
  std::vector<pipeline::PageInput> pages;
  if (!corpus.empty()) pages = corpus_inputs(corpus);
  for (const auto& arg : page_args) {
    const auto sep = arg.find(':');
    if (sep == std::string::npos) throw ValidationError("--page", "expected IMAGE:ANNOTATION, got " + arg);
    pages.push_back({arg.substr(0, sep), arg.substr(sep + 1), std::nullopt});
  }
  if (pages.empty()) throw ValidationError("--page", "no pages given");
  const auto runs = pipeline::run_pipeline(config, pages);
  int failed = 0;
  for (const auto& r : runs) {
    std::cout << (r.ok ? "ok     " : "FAILED ") << r.id;
    if (r.job) {
      for (int n = 1; n <= pipeline::kStageCount; ++n) std::cout << "  stage" << n << "=" << to_string(r.job->stage(n).status);
    }
    if (!r.ok) std::cout << "  " << r.error;
    std::cout << "\n";
    failed += !r.ok;
  }
  std::cout << runs.size() - failed << "/" << runs.size() << " page(s) restored into "
            << (config.output_dir / "jobs").string() << "\n";
  return failed == 0 ? 0 : 1;
}

int cmd_eval(const ConfigFlags& flags, const std::string& corpus, const std::vector<std::string>& pairs,
             const std::string& report_path) {
  const auto config = flags.build();
  pipeline::JobStore store(config.output_dir / "jobs");
  std::vector<pipeline::EvalPage> pages;
  if (!corpus.empty()) {
    for (const auto& p : corpus_inputs(corpus)) {
      if (store.exists(*p.id)) pages.push_back({*p.id, pipeline::ground_truth_path(p.annotation)});
    }
  }
  for (const auto& arg : pairs) {
    const auto sep = arg.find(':');
    if (sep == std::string::npos) throw ValidationError("--job", "expected JOB_ID:GT_ANNOTATION, got " + arg);
    pages.push_back({arg.substr(0, sep), arg.substr(sep + 1)});
  }
  if (pages.empty()) throw ValidationError("--job", "no jobs to evaluate");
  const auto report = pipeline::evaluate(config, store, pages);
  std::cout << pipeline::format_table(report);
  const fs::path out = report_path.empty() ? config.output_dir / "report.json" : fs::path(report_path);
  write_file_atomic(out, pipeline::to_json(report).dump(2) + "\n");
  std::cout << "report written to " << out.string() << "\n";
  return 0;
}

service::ReviewService* g_service = nullptr;

int cmd_serve(const ConfigFlags& flags, const std::string& host, int port, std::string token) {
  const auto config = flags.build();
  if (token.empty()) {
    if (const char* env = std::getenv("DOCRESTORE_REVIEW_TOKEN")) token = env;
  }
  if (token.empty()) throw ValidationError("--token", "a review token is required (flag or DOCRESTORE_REVIEW_TOKEN)");
  pipeline::JobStore store(config.output_dir / "jobs");
  pipeline::Engine engine(store, config);
  service::ReviewService svc(engine, token);
  const int bound = svc.bind(host, port);
  if (bound <= 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  g_service = &svc;
  std::signal(SIGINT, [](int) { if (g_service) g_service->stop(); });
  std::signal(SIGTERM, [](int) { if (g_service) g_service->stop(); });
  std::cout << "serving " << store.root().string() << " on http://" << host << ":" << bound << std::endl;
  svc.serve();
  g_service = nullptr;
  return 0;
}

int cmd_plan(const ConfigFlags& flags, const std::string& annotation, std::optional<int> width,
             std::optional<int> height) {
  const auto config = flags.build();
  const AnnotationDoc doc = read_annotation(annotation);
  const int w = width.value_or(doc.page.image.width);
  const int h = height.value_or(doc.page.image.height);
  std::vector<BBox> boxes;
  for (const auto& d : doc.page.damage_boxes) boxes.push_back(d.box);
  const auto plan = restoration::plan_patches(w, h, boxes, config.par);
  auto j = restoration::plan_to_json(plan, boxes);
  j["image"] = {{"width", w}, {"height", h}};
  j["params"] = {{"patch_size", config.par.patch_size}, {"stride", config.par.stride}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Historical document page restoration pipeline"};
  app.require_subcommand(1);
  ConfigFlags flags;

  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic damaged corpus");
  flags.add_to(*synth);
  std::size_t synth_pages = 20;
  std::string synth_dir = "corpus";
  synth->add_option("-n,--pages", synth_pages, "Number of pages");
  synth->add_option("-d,--dir", synth_dir, "Corpus directory");

  auto* restore = app.add_subcommand("restore", "Run the three stages over pages");
  flags.add_to(*restore);
  std::vector<std::string> restore_pages;
  std::string restore_corpus;
  restore->add_option("-p,--page", restore_pages, "IMAGE.png:ANNOTATION.json (repeatable)");
  restore->add_option("--corpus", restore_corpus, "Corpus directory written by synth");

  auto* eval = app.add_subcommand("eval", "Score restored jobs against ground truth");
  flags.add_to(*eval);
  std::string eval_corpus, eval_report;
  std::vector<std::string> eval_jobs;
  eval->add_option("--corpus", eval_corpus, "Corpus directory holding *.gt.json files");
  eval->add_option("-j,--job", eval_jobs, "JOB_ID:GT_ANNOTATION.json (repeatable)");
  eval->add_option("--report", eval_report, "Report path (default OUT/report.json)");

  auto* serve = app.add_subcommand("serve", "Start the review service");
  flags.add_to(*serve);
  std::string host = "127.0.0.1", token;
  int port = 8080;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--token", token, "Shared review token (else DOCRESTORE_REVIEW_TOKEN)");

  auto* plan = app.add_subcommand("plan", "Print the restoration window schedule for an annotation");
  flags.add_to(*plan);
  std::string plan_annotation;
  std::optional<int> plan_width, plan_height;
  plan->add_option("annotation", plan_annotation, "Annotation whose damage boxes are scheduled")->required();
  plan->add_option("--width", plan_width, "Override image width");
  plan->add_option("--height", plan_height, "Override image height");

  CLI11_PARSE(app, argc, argv);
  try {
    if (synth->parsed()) return cmd_synth(flags, synth_pages, synth_dir);
    if (restore->parsed()) return cmd_restore(flags, restore_pages, restore_corpus);
    if (eval->parsed()) return cmd_eval(flags, eval_corpus, eval_jobs, eval_report);
    if (serve->parsed()) return cmd_serve(flags, host, port, token);
    if (plan->parsed()) return cmd_plan(flags, plan_annotation, plan_width, plan_height);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
