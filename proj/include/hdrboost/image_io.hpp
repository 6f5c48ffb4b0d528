// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hdrboost/image.hpp"

namespace hdrboost {

// 8-bit PNG. Gray and palette files are expanded to RGB, alpha is dropped,
// 16-bit files are rejected with unsupported-bit-depth.
LdrImage load_ldr(const std::filesystem::path& path);
void save_ldr(const LdrImage& img, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const LdrImage& img);
LdrImage decode_png(std::span<const std::uint8_t> bytes);

/// Single-channel 8-bit PNG, used for masks and depth maps on the wire.
std::vector<std::uint8_t> encode_png_gray(std::span<const std::uint8_t> samples, std::size_t width,
                                          std::size_t height);
std::vector<std::uint8_t> decode_png_gray(std::span<const std::uint8_t> bytes, std::size_t& width,
                                          std::size_t& height);

enum class HdrFormat { rgbe, pfm };

/// .pfm selects PFM, anything else Radiance RGBE.
HdrFormat hdr_format_for(const std::filesystem::path& path);

void save_hdr(const HdrImage& img, const std::filesystem::path& path, HdrFormat format);
/// Detects the format from the file's magic bytes. Grayscale "Pf" files are
/// replicated into three channels.
HdrImage load_hdr(const std::filesystem::path& path);

/// Shared-exponent encoding of one pixel, rounded to nearest.
std::array<std::uint8_t, 4> rgbe_encode(float r, float g, float b) noexcept;
std::array<float, 3> rgbe_decode(std::array<std::uint8_t, 4> rgbe) noexcept;

/// Raw PFM access for single-channel planes (masks, residuals, checkpoints).
void save_pfm(std::span<const float> samples, std::size_t width, std::size_t height, std::size_t channels,
              const std::filesystem::path& path);
std::vector<float> load_pfm(const std::filesystem::path& path, std::size_t& width, std::size_t& height,
                            std::size_t& channels);

void save_mask(const SoftMask& mask, const std::filesystem::path& path);
SoftMask load_mask(const std::filesystem::path& path);

/// Visualisations: mask scaled to [0, 255], residual clamped to [0, 255].
void save_mask_png(const SoftMask& mask, const std::filesystem::path& path);
void save_luma_png(const LumaImage& luma, const std::filesystem::path& path);

}  // namespace hdrboost
