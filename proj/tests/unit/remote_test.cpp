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


#include <gtest/gtest.h>

#include <atomic>

#include "docrestore/adapters/remote.h"
#include "docrestore/adapters/wire.h"
#include "docrestore/core/errors.h"
#include "support/fake_server.h"

namespace docrestore::adapters {
namespace {

using nlohmann::json;

TEST(Base64, RoundTripAndRejectsJunk) {
  for (std::size_t n = 0; n < 10; ++n) {
    std::vector<std::uint8_t> bytes(n);
    for (std::size_t i = 0; i < n; ++i) bytes[i] = static_cast<std::uint8_t>(i * 37 + 200);
    EXPECT_EQ(base64_decode(base64_encode(bytes)), bytes);
  }
  EXPECT_EQ(base64_encode(std::vector<std::uint8_t>{'M', 'a', 'n'}), "TWFu");
  EXPECT_THROW(base64_decode("T!Fu"), ParseError);
}

TEST(Wire, RasterAndCandidates) {
  Image img(3, 2, 3);
  img.at(1, 1, 2) = 77;
  EXPECT_EQ(raster_from_json(raster_to_json(img), "image"), img);
  json bad = raster_to_json(img);
  bad["width"] = 4;
  EXPECT_THROW(raster_from_json(bad, "image"), ParseError);
  const std::vector<Candidate> c{{"a", 0.7}, {"b", 0.2}};
  EXPECT_EQ(candidates_from_json(candidates_to_json(c), "c"), c);
  EXPECT_EQ(candidate_contract_violation(c, 5), "");
  EXPECT_NE(candidate_contract_violation({{"a", 1.5}}, 5), "");
  EXPECT_NE(candidate_contract_violation({{"a", 0.1}, {"b", 0.2}}, 5), "");
  EXPECT_NE(candidate_contract_violation(c, 1), "");
}

RemoteConfig cfg(const std::string& url) {
  RemoteConfig c;
  c.endpoint = url;
  c.timeout_ms = 2000;
  c.retries = 1;
  return c;
}

TEST(Remote, OcrRoundTripSendsCropAndLocalBox) {
  testing::FakeServer server;
  json seen;
  server.on("/ocr", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    res.set_content(R"({"candidates": [["天", 0.8], ["大", 0.1]]})", "application/json");
  });
  server.start();
  RemoteOcr ocr(cfg(server.url()));
  const Image page(100, 100, 1, 255);
  const auto c = ocr.recognize(page, {20, 30, 40, 50}, 5);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].label, "天");
  EXPECT_EQ(seen["k"], 5);
  EXPECT_EQ(seen["image"]["width"], 36);
  EXPECT_EQ(seen["box"][0], 8.0);
}

TEST(Remote, OutOfRangeProbabilityIsContractViolation) {
  testing::FakeServer server;
  server.on("/ocr", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"candidates": [["a", 1.5]]})", "application/json");
  });
  server.start();
  RemoteOcr ocr(cfg(server.url()));
  EXPECT_THROW(ocr.recognize(Image(50, 50, 1, 255), {5, 5, 20, 20}, 5), ContractViolationError);
}

TEST(Remote, MalformedAndMissingKey) {
  testing::FakeServer server;
  server.on("/ocr", [](const httplib::Request&, httplib::Response& res) { res.set_content("<html>", "text/html"); });
  server.on("/lm", [](const httplib::Request&, httplib::Response& res) { res.set_content("{}", "application/json"); });
  server.start();
  RemoteOcr ocr(cfg(server.url()));
  EXPECT_THROW(ocr.recognize(Image(50, 50, 1, 255), {5, 5, 20, 20}, 5), MalformedResponseError);
  RemoteLm lm(cfg(server.url()));
  EXPECT_THROW(lm.predict({"a[mask1]", 5}), MalformedResponseError);
}

TEST(Remote, LmRoundTripAndUnknownSlot) {
  testing::FakeServer server;
  std::atomic<int> mode{0};
  server.on("/lm", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(mode == 0 ? R"({"predictions": {"1": [["b", 0.6]], "2": [["d", 0.3], ["e", 0.2]]}})"
                              : R"({"predictions": {"7": [["b", 0.6]]}})",
                    "application/json");
  });
  server.start();
  RemoteLm lm(cfg(server.url()));
  const auto out = lm.predict({"a[mask1]c[mask2]", 5});
  EXPECT_EQ(out.at(2)[1].label, "e");
  mode = 1;
  EXPECT_THROW(lm.predict({"a[mask1]", 5}), ContractViolationError);
}

TEST(Remote, InpaintShapeChecked) {
  testing::FakeServer server;
  std::atomic<bool> wrong{false};
  server.on("/inpaint", [&](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    json image = body["damaged"];
    if (wrong) image = raster_to_json(Image(2, 2, 3, 0));
    res.set_content(json{{"image", image}}.dump(), "application/json");
  });
  server.start();
  RemoteInpaint inpaint(cfg(server.url()));
  const InpaintRequest r{Image(8, 6, 3, 100), Image(8, 6, 1, 255), Image(8, 6, 1, 0), {}};
  EXPECT_EQ(inpaint.inpaint(r), r.damaged);
  wrong = true;
  EXPECT_THROW(inpaint.inpaint(r), ContractViolationError);
}

TEST(Remote, ServerErrorsRetriedThenTimeout) {
  testing::FakeServer server;
  std::atomic<int> hits{0};
  server.on("/lm", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 503;
  });
  server.start();
  RemoteLm lm(cfg(server.url()));
  EXPECT_THROW(lm.predict({"[mask1]", 5}), TimeoutError);
  EXPECT_EQ(hits.load(), 2);
}

TEST(Remote, ClientErrorIsContractViolation) {
  testing::FakeServer server;
  server.on("/lm", [](const httplib::Request&, httplib::Response& res) { res.status = 422; });
  server.start();
  RemoteLm lm(cfg(server.url()));
  EXPECT_THROW(lm.predict({"[mask1]", 5}), ContractViolationError);
}

TEST(Remote, UnreachableEndpointTimesOut) {
  testing::FakeServer server;
  server.start();
  const std::string url = server.url();
  server.stop();
  auto c = cfg(url);
  c.timeout_ms = 300;
  c.retries = 0;
  RemoteOcr ocr(c);
  EXPECT_THROW(ocr.recognize(Image(50, 50, 1, 255), {5, 5, 20, 20}, 5), TimeoutError);
}

TEST(Remote, BadConfigRejected) {
  RemoteConfig c;
  EXPECT_THROW(RemoteClient{c}, ContractError);
  c.endpoint = "ftp://x";
  EXPECT_THROW(RemoteClient{c}, ContractError);
}

}  // namespace
}  // namespace docrestore::adapters
