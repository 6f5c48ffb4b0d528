// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <thread>

#include "hdrboost/backend.hpp"
#include "hdrboost/image_io.hpp"
#include "hdrboost/wire.hpp"
#include "synthetic.hpp"

using namespace hdrboost;
using namespace std::chrono_literals;

namespace {

LdrImage pattern(std::size_t w, std::size_t h) {
  LdrImage img(w, h);
  for (std::size_t i = 0; i < img.data().size(); ++i) img[i] = std::uint8_t((i * 37 + 11) % 256);
  return img;
}

InpaintRequest request(std::size_t w = 6, std::size_t h = 4, float m = 1.0f) {
  InpaintRequest req;
  req.image = LdrImage(w, h, 100);
  req.mask = SoftMask(w, h, m);
  req.prompt = "a photo";
  req.seed = 9;
  return req;
}

// Local HTTP server on an ephemeral port, stopped on destruction.
struct StubServer {
  httplib::Server srv;
  std::thread thread;
  int port = 0;

  void start() {
    port = srv.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { srv.listen_after_bind(); });
    srv.wait_until_ready();
  }
  ~StubServer() {
    srv.stop();
    if (thread.joinable()) thread.join();
  }
  RemoteConfig config(std::chrono::seconds timeout = 5s) const {
    RemoteConfig cfg;
    cfg.url = "http://127.0.0.1:" + std::to_string(port);
    cfg.timeout = timeout;
    cfg.connect_timeout = 2s;
    return cfg;
  }
};

std::string reply_with(const LdrImage& img, std::uint64_t seed = 9) { return wire::encode_response({img, seed, 12.5}); }

}  // namespace

TEST_CASE("identity backend returns its input") {
  IdentityBackend id;
  InpaintRequest req = request();
  req.image = pattern(6, 4);
  const InpaintResponse res = inpaint(req, id);
  CHECK(res.image == req.image);
  CHECK(res.seed == 9);
  CHECK(res.elapsed_ms >= 0.0);
}

TEST_CASE("oracle fill") {
  SUBCASE("flat fill at the target") {
    OracleFillBackend b({180.0, 0.0, 1});
    InpaintRequest req = request();
    req.strength = 1.0;
    const LdrImage out = inpaint(req, b).image;
    for (std::uint8_t v : out.data()) CHECK(v == 180);
  }
  SUBCASE("partial strength moves part way") {
    OracleFillBackend b({200.0, 0.0, 1});
    InpaintRequest req = request();
    req.strength = 0.5;
    CHECK(inpaint(req, b).image[0] == 150);
  }
  SUBCASE("deterministic per seed and stronger fills move further") {
    OracleFillBackend b({220.0, 25.0, 3});
    InpaintRequest req = request(16, 16);
    const LdrImage a = inpaint(req, b).image;
    CHECK(a == inpaint(req, b).image);
    req.seed = 10;
    CHECK_FALSE(a == inpaint(req, b).image);
    req.seed = 9;
    double prev = 100.0;
    for (double s : {0.2, 0.5, 0.9}) {
      req.strength = s;
      const LumaImage y = luminance(inpaint(req, b).image);
      double mean = 0.0;
      for (float v : y.data()) mean += v;
      mean /= double(y.pixel_count());
      CHECK(mean > prev);
      prev = mean;
    }
  }
  SUBCASE("texture stays within its amplitude") {
    OracleFillBackend b({128.0, 10.0, 5});
    for (std::size_t y = 0; y < 20; ++y)
      for (std::size_t x = 0; x < 20; ++x) CHECK(std::abs(b.texture(x, y, 4)) <= 10.0);
  }
  SUBCASE("unmasked pixels are preserved") {
    OracleFillBackend b({250.0, 30.0, 2});
    InpaintRequest req = request(8, 8, 0.0f);
    req.image = pattern(8, 8);
    req.mask[10] = 1.0f;
    const LdrImage out = inpaint(req, b).image;
    for (std::size_t i = 0; i < 64; ++i) {
      if (i == 10) continue;
      for (int c = 0; c < 3; ++c) REQUIRE(out[3 * i + c] == req.image[3 * i + c]);
    }
  }
  CHECK_THROWS_AS(OracleFillBackend({300.0, 0.0, 0}), Error);
}

TEST_CASE("request validation") {
  IdentityBackend id;
  InpaintRequest req = request();
  req.strength = 0.0;
  CHECK_THROWS_AS(inpaint(req, id), Error);
  req = request();
  req.steps = 0;
  CHECK_THROWS_AS(inpaint(req, id), Error);
  req = request();
  req.mask = SoftMask(3, 3, 1.0f);
  CHECK_THROWS_AS(inpaint(req, id), Error);
  req = request();
  req.mask[0] = 1.5f;
  CHECK_THROWS_AS(inpaint(req, id), Error);
}

TEST_CASE("backend names") {
  CHECK(parse_backend_kind("identity") == BackendKind::identity);
  CHECK(parse_backend_kind("oracle-fill") == BackendKind::oracle_fill);
  CHECK(parse_backend_kind("oracle") == BackendKind::oracle_fill);
  CHECK(parse_backend_kind("remote") == BackendKind::remote);
  CHECK(to_string(BackendKind::remote) == "remote");
  CHECK_THROWS_AS(parse_backend_kind("sdxl"), Error);
}

TEST_CASE("wire encoding") {
  const std::vector<std::uint8_t> bytes{0, 1, 2, 250, 255, 77, 3};
  CHECK(wire::base64_encode(bytes) == "AAEC+v9NAw==");
  CHECK(wire::base64_decode("AAEC+v9NAw==") == bytes);
  CHECK_THROWS_AS(wire::base64_decode("not base64!"), Error);

  SoftMask m(5, 2);
  for (std::size_t i = 0; i < 10; ++i) m[i] = float(i) / 9.0f;
  const SoftMask md = wire::decode_mask_png(wire::encode_mask_png(m));
  for (std::size_t i = 0; i < 10; ++i) CHECK(md[i] == doctest::Approx(std::round(m[i] * 255.0f) / 255.0f));

  InpaintRequest req = request(7, 3, 0.0f);
  req.image = pattern(7, 3);
  req.mask[4] = 1.0f;
  req.depth = LumaImage(7, 3, 0.5f);
  req.negative_prompt = "blurry";
  req.strength = 0.8;
  req.seed = 123456789012345ull;
  const std::string body = wire::encode_request(req);
  const auto j = nlohmann::json::parse(body);
  for (const char* key : {"image_png_b64", "mask_png_b64", "depth_png_b64", "prompt", "negative_prompt", "strength",
                          "seed", "steps", "guidance_scale", "control_scale"})
    CHECK(j.contains(key));
  const InpaintRequest back = wire::decode_request(body);
  CHECK(back.image == req.image);
  CHECK(back.mask[4] == 1.0f);
  CHECK(back.mask[3] == 0.0f);
  CHECK(back.depth.has_value());
  CHECK(back.prompt == req.prompt);
  CHECK(back.negative_prompt == "blurry");
  CHECK(back.strength == 0.8);
  CHECK(back.seed == req.seed);

  const InpaintResponse res = wire::decode_response(reply_with(req.image, 4));
  CHECK(res.image == req.image);
  CHECK(res.seed == 4);
  CHECK(res.elapsed_ms == 12.5);

  CHECK_THROWS_WITH_AS(wire::decode_response("{\"seed\": 1}"), doctest::Contains("protocol-error"), Error);
  CHECK_THROWS_WITH_AS(wire::decode_response("not json"), doctest::Contains("protocol-error"), Error);
  CHECK_THROWS_AS(wire::decode_response(R"({"image_png_b64": 5, "seed": 1, "elapsed_ms": 0})"), Error);
  CHECK(wire::decode_error(wire::encode_error("boom")) == "boom");
}

TEST_CASE("remote backend against a stub service") {
  const LdrImage canned = pattern(6, 4);

  SUBCASE("success returns the decoded image") {
    StubServer s;
    std::string seen;
    s.srv.Post("/v1/inpaint", [&](const httplib::Request& r, httplib::Response& res) {
      seen = r.body;
      res.set_content(reply_with(canned), "application/json");
    });
    s.start();
    RemoteBackend b(s.config());
    const InpaintRequest req = request();
    const InpaintResponse res = b.inpaint(req);
    CHECK(res.image == canned);
    CHECK(wire::decode_request(seen).image == req.image);
  }
  SUBCASE("client composites unmasked pixels") {
    StubServer s;
    s.srv.Post("/v1/inpaint", [&](const httplib::Request&, httplib::Response& res) {
      res.set_content(reply_with(canned), "application/json");
    });
    s.start();
    RemoteBackend b(s.config());
    InpaintRequest req = request(6, 4, 0.0f);
    req.mask[0] = 1.0f;
    const LdrImage out = inpaint(req, b).image;
    CHECK(out[0] == canned[0]);
    CHECK(out[3] == 100);
  }
  SUBCASE("4xx is a protocol error and is not retried") {
    StubServer s;
    std::atomic<int> calls{0};
    s.srv.Post("/v1/inpaint", [&](const httplib::Request&, httplib::Response& res) {
      ++calls;
      res.status = 400;
      res.set_content(wire::encode_error("bad mask"), "application/json");
    });
    s.start();
    RemoteBackend b(s.config());
    CHECK_THROWS_WITH_AS(b.inpaint(request()), doctest::Contains("protocol-error"), Error);
    CHECK(calls == 1);
  }
  SUBCASE("one 5xx is retried") {
    StubServer s;
    std::atomic<int> calls{0};
    s.srv.Post("/v1/inpaint", [&](const httplib::Request&, httplib::Response& res) {
      if (calls++ == 0) {
        res.status = 503;
        res.set_content(wire::encode_error("loading"), "application/json");
        return;
      }
      res.set_content(reply_with(canned), "application/json");
    });
    s.start();
    RemoteBackend b(s.config());
    CHECK(b.inpaint(request()).image == canned);
    CHECK(calls == 2);
  }
  SUBCASE("persistent 5xx gives up") {
    StubServer s;
    std::atomic<int> calls{0};
    s.srv.Post("/v1/inpaint", [&](const httplib::Request&, httplib::Response& res) {
      ++calls;
      res.status = 500;
    });
    s.start();
    RemoteBackend b(s.config());
    CHECK_THROWS_WITH_AS(b.inpaint(request()), doctest::Contains("backend-unreachable"), Error);
    CHECK(calls == 2);
  }
  SUBCASE("slow service times out") {
    StubServer s;
    s.srv.Post("/v1/inpaint", [&](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(1500ms);
      res.set_content(reply_with(canned), "application/json");
    });
    s.start();
    RemoteConfig cfg = s.config(1s);
    cfg.retries = 0;
    RemoteBackend b(cfg);
    CHECK_THROWS_WITH_AS(b.inpaint(request()), doctest::Contains("backend-timeout"), Error);
  }
  SUBCASE("malformed reply is a protocol error") {
    StubServer s;
    s.srv.Post("/v1/inpaint", [&](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"image_png_b64\": \"AAAA\", \"seed\": 1, \"elapsed_ms\": 1}", "application/json");
    });
    s.start();
    RemoteBackend b(s.config());
    CHECK_THROWS_AS(b.inpaint(request()), Error);
  }
  SUBCASE("wrong-sized reply is rejected") {
    StubServer s;
    s.srv.Post("/v1/inpaint", [&](const httplib::Request&, httplib::Response& res) {
      res.set_content(reply_with(pattern(3, 3)), "application/json");
    });
    s.start();
    RemoteBackend b(s.config());
    CHECK_THROWS_WITH_AS(inpaint(request(), b), doctest::Contains("dimension-mismatch"), Error);
  }
  SUBCASE("health and depth") {
    StubServer s;
    s.srv.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"status":"ok"})", "application/json");
    });
    s.srv.Post("/v1/depth", [](const httplib::Request& r, httplib::Response& res) {
      const auto j = nlohmann::json::parse(r.body);
      const LdrImage img = decode_png(wire::base64_decode(j.at("image_png_b64").get<std::string>()));
      LumaImage d(img.width(), img.height(), 0.25f);
      res.set_content(nlohmann::json{{"depth_png_b64", wire::base64_encode(wire::encode_depth_png(d))}}.dump(),
                      "application/json");
    });
    s.start();
    RemoteBackend b(s.config());
    CHECK(b.health().find("ok") != std::string::npos);
    const auto d = b.estimate_depth(pattern(5, 3));
    REQUIRE(d.has_value());
    CHECK(d->width() == 5);
    CHECK((*d)[7] == doctest::Approx(0.25).epsilon(0.01));
  }
}

TEST_CASE("unreachable service") {
  RemoteConfig cfg;
  cfg.url = "http://127.0.0.1:1";
  cfg.connect_timeout = 1s;
  RemoteBackend b(cfg);
  CHECK_THROWS_WITH_AS(b.inpaint(request()), doctest::Contains("backend-unreachable"), Error);
  CHECK_THROWS_AS(b.health(), Error);
}
