// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include <string>

#include "hdrboost/backend.hpp"
#include "hdrboost/wire.hpp"

namespace hdrboost {
namespace {

constexpr const char* kJson = "application/json";

httplib::Client make_client(const RemoteConfig& cfg) {
  httplib::Client cli(cfg.url);
  if (!cli.is_valid()) throw Error(Errc::invalid_argument, "invalid remote URL '" + cfg.url + "'");
  cli.set_connection_timeout(cfg.connect_timeout);
  cli.set_read_timeout(cfg.timeout);
  cli.set_write_timeout(cfg.timeout);
  return cli;
}

Error transport_error(httplib::Error err, const std::string& url) {
  const std::string what = url + ": " + httplib::to_string(err);
  switch (err) {
    case httplib::Error::Read:
    case httplib::Error::ConnectionTimeout:
      return Error(Errc::backend_timeout, what);
    default:
      return Error(Errc::backend_unreachable, what);
  }
}

// Transport failures and 5xx are retried; a 4xx is final.
Error status_error(const httplib::Response& res, const std::string& url) {
  const std::string what = url + ": HTTP " + std::to_string(res.status) + " " + wire::decode_error(res.body);
  if (res.status >= 400 && res.status < 500) return Error(Errc::protocol_error, what);
  return Error(Errc::backend_unreachable, what);
}

}  // namespace

RemoteBackend::RemoteBackend(RemoteConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.retries < 0) throw Error(Errc::invalid_argument, "retries must be non-negative");
  make_client(cfg_);
}

std::string RemoteBackend::post(const std::string& path, const std::string& body) {
  const std::string url = cfg_.url + path;
  for (int attempt = 0;; ++attempt) {
    httplib::Client cli = make_client(cfg_);
    const httplib::Result res = cli.Post(path, body, kJson);
    if (res && res->status == 200) return res->body;
    const Error err = res ? status_error(*res, url) : transport_error(res.error(), url);
    if (err.code() == Errc::protocol_error || attempt >= cfg_.retries) throw err;
  }
}

InpaintResponse RemoteBackend::inpaint(const InpaintRequest& req) {
  return wire::decode_response(post("/v1/inpaint", wire::encode_request(req)));
}

std::string RemoteBackend::health() {
  httplib::Client cli = make_client(cfg_);
  const httplib::Result res = cli.Get("/v1/health");
  if (!res) throw transport_error(res.error(), cfg_.url + "/v1/health");
  if (res->status != 200) throw status_error(*res, cfg_.url + "/v1/health");
  return res->body;
}

std::optional<LumaImage> RemoteBackend::estimate_depth(const LdrImage& image) {
  LumaImage d = wire::decode_depth_response(post("/v1/depth", wire::encode_depth_request(image)));
  require_same_size(image, d, "depth map differs from image");
  return d;
}

}  // namespace hdrboost
