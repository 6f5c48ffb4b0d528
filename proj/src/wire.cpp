// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/wire.hpp"

#include <sodium.h>

#include <cmath>
#include <json.hpp>

#include "hdrboost/image_io.hpp"

namespace hdrboost::wire {
namespace {

using nlohmann::json;

constexpr int kVariant = sodium_base64_VARIANT_ORIGINAL;

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error(Errc::io_failure, "libsodium failed to initialize");
}

std::vector<std::uint8_t> encode_gray(std::span<const float> values, std::size_t w, std::size_t h) {
  std::vector<std::uint8_t> samples(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) samples[i] = quantize_u8(values[i] * 255.0);
  return encode_png_gray(samples, w, h);
}

std::vector<float> decode_gray(std::span<const std::uint8_t> png, std::size_t& w, std::size_t& h) {
  const auto samples = decode_png_gray(png, w, h);
  std::vector<float> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i] / 255.0f;
  return out;
}

json parse(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::protocol_error, "body is not a JSON object");
  return j;
}

template <class T>
T field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw Error(Errc::protocol_error, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::protocol_error, std::string("field '") + key + "' has the wrong type");
  }
}

// Undecodable image payloads are a protocol problem, not a local file problem.
template <class F>
auto decode_payload(const char* key, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::protocol_error) throw;
    throw Error(Errc::protocol_error, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  ensure_sodium();
  std::string out(sodium_base64_encoded_len(bytes.size(), kVariant), '\0');
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), kVariant);
  out.resize(out.size() - 1);  // trailing NUL
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  ensure_sodium();
  std::vector<std::uint8_t> out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), "\r\n", &len, &end, kVariant) != 0 ||
      end != text.data() + text.size()) {
    throw Error(Errc::protocol_error, "invalid base64 payload");
  }
  out.resize(len);
  return out;
}

std::vector<std::uint8_t> encode_mask_png(const SoftMask& mask) {
  return encode_gray(mask.data(), mask.width(), mask.height());
}

SoftMask decode_mask_png(std::span<const std::uint8_t> png) {
  std::size_t w = 0, h = 0;
  auto values = decode_gray(png, w, h);
  return SoftMask(w, h, std::move(values));
}

std::vector<std::uint8_t> encode_depth_png(const LumaImage& depth) {
  return encode_gray(depth.data(), depth.width(), depth.height());
}

LumaImage decode_depth_png(std::span<const std::uint8_t> png) {
  std::size_t w = 0, h = 0;
  auto values = decode_gray(png, w, h);
  return LumaImage(w, h, std::move(values));
}

std::string encode_request(const InpaintRequest& req) {
  json j;
  j["image_png_b64"] = base64_encode(encode_png(req.image));
  j["mask_png_b64"] = base64_encode(encode_mask_png(req.mask));
  if (req.depth) j["depth_png_b64"] = base64_encode(encode_depth_png(*req.depth));
  j["prompt"] = req.prompt;
  j["negative_prompt"] = req.negative_prompt;
  j["strength"] = req.strength;
  j["seed"] = req.seed;
  j["steps"] = req.steps;
  j["guidance_scale"] = req.guidance_scale;
  j["control_scale"] = req.control_scale;
  return j.dump();
}

InpaintRequest decode_request(std::string_view body) {
  const json j = parse(body);
  InpaintRequest req;
  req.image = decode_payload("image_png_b64",
                             [&] { return decode_png(base64_decode(field<std::string>(j, "image_png_b64"))); });
  req.mask = decode_payload("mask_png_b64",
                            [&] { return decode_mask_png(base64_decode(field<std::string>(j, "mask_png_b64"))); });
  if (j.contains("depth_png_b64") && !j["depth_png_b64"].is_null()) {
    req.depth = decode_payload(
        "depth_png_b64", [&] { return decode_depth_png(base64_decode(field<std::string>(j, "depth_png_b64"))); });
  }
  req.prompt = field<std::string>(j, "prompt");
  req.negative_prompt = j.contains("negative_prompt") ? field<std::string>(j, "negative_prompt") : "";
  req.strength = field<double>(j, "strength");
  req.seed = field<std::uint64_t>(j, "seed");
  req.steps = field<int>(j, "steps");
  req.guidance_scale = field<double>(j, "guidance_scale");
  req.control_scale = field<double>(j, "control_scale");
  return req;
}

std::string encode_response(const InpaintResponse& res) {
  json j;
  j["image_png_b64"] = base64_encode(encode_png(res.image));
  j["seed"] = res.seed;
  j["elapsed_ms"] = res.elapsed_ms;
  return j.dump();
}

InpaintResponse decode_response(std::string_view body) {
  const json j = parse(body);
  InpaintResponse res;
  res.image = decode_payload("image_png_b64",
                             [&] { return decode_png(base64_decode(field<std::string>(j, "image_png_b64"))); });
  res.seed = field<std::uint64_t>(j, "seed");
  res.elapsed_ms = field<double>(j, "elapsed_ms");
  return res;
}

std::string encode_error(std::string_view message) { return json{{"error", message}}.dump(); }

std::string decode_error(std::string_view body) {
  const json j = json::parse(body, nullptr, false);
  if (j.is_object() && j.contains("error") && j["error"].is_string()) return j["error"].get<std::string>();
  return std::string(body);
}

std::string encode_depth_request(const LdrImage& image) {
  return json{{"image_png_b64", base64_encode(encode_png(image))}}.dump();
}

LumaImage decode_depth_response(std::string_view body) {
  const json j = parse(body);
  return decode_payload("depth_png_b64",
                        [&] { return decode_depth_png(base64_decode(field<std::string>(j, "depth_png_b64"))); });
}

}  // namespace hdrboost::wire
