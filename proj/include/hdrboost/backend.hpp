// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "hdrboost/image.hpp"

namespace hdrboost {

/// One masked, partially-noised generation call on a single bracket frame.
struct InpaintRequest {
  LdrImage image;
  SoftMask mask;                    // > 0 marks the region to generate
  std::optional<LumaImage> depth;   // structural condition in [0, 1]; the service computes one when absent
  std::string prompt;
  std::string negative_prompt;
  double strength = 0.95;           // fraction of the noise schedule re-run, (0, 1]
  std::uint64_t seed = 0;
  int steps = 50;
  double guidance_scale = 5.0;
  double control_scale = 0.5;

  void validate() const;
};

struct InpaintResponse {
  LdrImage image;
  std::uint64_t seed = 0;
  double elapsed_ms = 0.0;
};

/// Implementations must be reentrant: the pipeline issues the per-EV calls
/// of one iteration concurrently.
class InpaintBackend {
 public:
  virtual ~InpaintBackend() = default;
  virtual std::string_view name() const = 0;
  virtual InpaintResponse inpaint(const InpaintRequest& req) = 0;
  /// Depth condition for a frame, normalized to [0, 1] with near bright.
  /// Backends that ignore depth return nothing.
  virtual std::optional<LumaImage> estimate_depth(const LdrImage&) { return std::nullopt; }
};

/// Validates the request, runs the backend, checks the reply's dimensions
/// and composites the request pixels back wherever the mask is 0.
InpaintResponse inpaint(const InpaintRequest& req, InpaintBackend& backend);

/// Returns the request image untouched.
class IdentityBackend final : public InpaintBackend {
 public:
  std::string_view name() const override { return "identity"; }
  InpaintResponse inpaint(const InpaintRequest& req) override;
};

struct OracleFillConfig {
  double target_luma = 180.0;
  double texture_amplitude = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Test oracle standing in for a diffusion model. Masked pixels move from
/// their current luminance toward target_luma + texture(x, y) by
/// strength * mask; chroma ratios are kept. texture is a hash of the pixel
/// coordinates and both seeds, uniform in [-amplitude, amplitude].
class OracleFillBackend final : public InpaintBackend {
 public:
  explicit OracleFillBackend(OracleFillConfig cfg);
  std::string_view name() const override { return "oracle-fill"; }
  InpaintResponse inpaint(const InpaintRequest& req) override;

  const OracleFillConfig& config() const noexcept { return cfg_; }
  double texture(std::size_t x, std::size_t y, std::uint64_t request_seed) const noexcept;

 private:
  OracleFillConfig cfg_;
};

std::unique_ptr<InpaintBackend> oracle_fill_configure(double target_luma, double texture_amplitude,
                                                      std::uint64_t seed);

struct RemoteConfig {
  std::string url = "http://127.0.0.1:8000";
  std::chrono::seconds timeout{300};
  std::chrono::seconds connect_timeout{10};
  int retries = 1;
};

/// HTTP client for the diffusion service (POST /v1/inpaint, GET /v1/health,
/// POST /v1/depth).
class RemoteBackend final : public InpaintBackend {
 public:
  explicit RemoteBackend(RemoteConfig cfg);
  std::string_view name() const override { return "remote"; }
  InpaintResponse inpaint(const InpaintRequest& req) override;

  /// Parsed body of GET /v1/health; throws backend-unreachable when the
  /// service is down or still loading.
  std::string health();
  /// Server-side monocular depth via POST /v1/depth.
  std::optional<LumaImage> estimate_depth(const LdrImage& image) override;

  const RemoteConfig& config() const noexcept { return cfg_; }

 private:
  std::string post(const std::string& path, const std::string& body);

  RemoteConfig cfg_;
};

enum class BackendKind { identity, oracle_fill, remote };

BackendKind parse_backend_kind(std::string_view name);
std::string_view to_string(BackendKind kind) noexcept;

}  // namespace hdrboost
