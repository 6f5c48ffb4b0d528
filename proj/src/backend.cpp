// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/backend.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace hdrboost {

void InpaintRequest::validate() const {
  if (image.empty()) throw Error(Errc::invalid_argument, "inpaint request has no image");
  require_same_size(image, mask, "inpaint request mask differs from image");
  if (depth) require_same_size(image, *depth, "inpaint request depth differs from image");
  if (!(strength > 0.0 && strength <= 1.0)) throw Error(Errc::invalid_argument, "strength must lie in (0, 1]");
  if (steps < 1) throw Error(Errc::invalid_argument, "steps must be at least 1");
  if (!(guidance_scale >= 0.0)) throw Error(Errc::invalid_argument, "guidance scale must be non-negative");
  if (!(control_scale >= 0.0 && control_scale <= 1.0)) {
    throw Error(Errc::invalid_argument, "control scale must lie in [0, 1]");
  }
  for (float m : mask.data()) {
    if (!(m >= 0.0f && m <= 1.0f)) throw Error(Errc::invalid_argument, "mask values must lie in [0, 1]");
  }
}

InpaintResponse inpaint(const InpaintRequest& req, InpaintBackend& backend) {
  req.validate();
  const auto start = std::chrono::steady_clock::now();
  InpaintResponse res = backend.inpaint(req);
  if (!res.image.same_size(req.image)) {
    throw Error(Errc::dimension_mismatch, std::string(backend.name()) + " returned an image of the wrong size");
  }
  // Latent-space blending is not pixel exact; restore the known region.
  for (std::size_t i = 0; i < req.mask.pixel_count(); ++i) {
    if (req.mask[i] > 0.0f) continue;
    for (int c = 0; c < 3; ++c) res.image[3 * i + c] = req.image[3 * i + c];
  }
  if (res.elapsed_ms <= 0.0) {
    res.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return res;
}

InpaintResponse IdentityBackend::inpaint(const InpaintRequest& req) { return {req.image, req.seed, 0.0}; }

void OracleFillConfig::validate() const {
  if (!(target_luma >= 0.0 && target_luma <= 255.0)) throw Error(Errc::invalid_argument, "target luma outside [0, 255]");
  if (!(texture_amplitude >= 0.0 && texture_amplitude <= 255.0)) {
    throw Error(Errc::invalid_argument, "texture amplitude outside [0, 255]");
  }
}

OracleFillBackend::OracleFillBackend(OracleFillConfig cfg) : cfg_(cfg) { cfg_.validate(); }

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double OracleFillBackend::texture(std::size_t x, std::size_t y, std::uint64_t request_seed) const noexcept {
  if (cfg_.texture_amplitude == 0.0) return 0.0;
  const std::uint64_t h = mix(mix(mix(cfg_.seed) ^ request_seed) ^ (static_cast<std::uint64_t>(y) << 32 | x));
  const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
  return cfg_.texture_amplitude * (2.0 * unit - 1.0);
}

InpaintResponse OracleFillBackend::inpaint(const InpaintRequest& req) {
  const LumaImage current = luminance(req.image);
  LumaImage target = current;
  const std::size_t w = req.image.width();
  for (std::size_t i = 0; i < current.pixel_count(); ++i) {
    const float m = req.mask[i];
    if (m <= 0.0f) continue;
    const double fill = cfg_.target_luma + texture(i % w, i / w, req.seed);
    target[i] = static_cast<float>(current[i] + req.strength * m * (fill - current[i]));
  }
  return {replace_luminance(req.image, target), req.seed, 0.0};
}

std::unique_ptr<InpaintBackend> oracle_fill_configure(double target_luma, double texture_amplitude,
                                                      std::uint64_t seed) {
  return std::make_unique<OracleFillBackend>(OracleFillConfig{target_luma, texture_amplitude, seed});
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "identity") return BackendKind::identity;
  if (name == "oracle" || name == "oracle-fill") return BackendKind::oracle_fill;
  if (name == "remote") return BackendKind::remote;
  throw Error(Errc::invalid_argument, "unknown backend '" + std::string(name) + "'");
}

std::string_view to_string(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::identity: return "identity";
    case BackendKind::oracle_fill: return "oracle";
    case BackendKind::remote: return "remote";
  }
  return "unknown";
}

}  // namespace hdrboost
