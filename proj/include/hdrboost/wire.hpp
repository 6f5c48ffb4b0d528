// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hdrboost/backend.hpp"

// JSON bodies exchanged with the diffusion service. Images travel as
// base64 PNG: RGB for frames, 8-bit grayscale for masks (255 = inpaint)
// and depth maps.
namespace hdrboost::wire {

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Soft mask values are quantized to round(m * 255).
std::vector<std::uint8_t> encode_mask_png(const SoftMask& mask);
SoftMask decode_mask_png(std::span<const std::uint8_t> png);
std::vector<std::uint8_t> encode_depth_png(const LumaImage& depth);
LumaImage decode_depth_png(std::span<const std::uint8_t> png);

std::string encode_request(const InpaintRequest& req);
/// Throws protocol-error on missing or mistyped fields.
InpaintRequest decode_request(std::string_view body);

std::string encode_response(const InpaintResponse& res);
InpaintResponse decode_response(std::string_view body);

std::string encode_error(std::string_view message);
/// The "error" field of an error body, or the raw body when it is not JSON.
std::string decode_error(std::string_view body);

/// Depth endpoint: {"image_png_b64"} in, {"depth_png_b64"} out.
std::string encode_depth_request(const LdrImage& image);
LumaImage decode_depth_response(std::string_view body);

}  // namespace hdrboost::wire
