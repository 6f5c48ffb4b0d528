// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdrboost/error.hpp"

namespace hdrboost {

/// Row-major interleaved pixel buffer. The tag keeps buffers that share a
/// sample type (luminance vs. mask) from being mixed up.
template <class T, std::size_t Channels, class Tag>
class Image {
 public:
  using value_type = T;
  static constexpr std::size_t channels = Channels;

  Image() = default;
  Image(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height * Channels, fill) {}
  Image(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_ * Channels) {
      throw Error(Errc::dimension_mismatch, "buffer length does not match width x height x channels");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return width_ * height_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  T* pixel(std::size_t x, std::size_t y) noexcept { return data_.data() + (y * width_ + x) * Channels; }
  const T* pixel(std::size_t x, std::size_t y) const noexcept {
    return data_.data() + (y * width_ + x) * Channels;
  }

  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  template <class U, std::size_t C, class G>
  bool same_size(const Image<U, C, G>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

struct LdrTag {};
struct HdrTag {};
struct LumaTag {};
struct MaskTag {};

/// 8-bit display-referred RGB.
using LdrImage = Image<std::uint8_t, 3, LdrTag>;
/// Linear, non-negative RGB radiance.
using HdrImage = Image<float, 3, HdrTag>;
/// One luminance sample per pixel, on the scale of the source channels.
using LumaImage = Image<float, 1, LumaTag>;
/// Per-pixel weights in [0, 1].
using SoftMask = Image<float, 1, MaskTag>;

template <class A, class B>
void require_same_size(const A& a, const B& b, const char* what) {
  if (!a.same_size(b)) throw Error(Errc::dimension_mismatch, what);
}

// BT.601 luma weights.
inline constexpr float kLumaR = 0.299f;
inline constexpr float kLumaG = 0.587f;
inline constexpr float kLumaB = 0.114f;

LumaImage luminance(const LdrImage& img);
LumaImage luminance(const HdrImage& img);

/// Rescales each pixel's RGB by new_luma / old_luma (hue preserving) and
/// clamps to [0, 255]. Black pixels become gray at the requested level.
LdrImage replace_luminance(const LdrImage& img, const LumaImage& new_luma);

/// Round half away from zero, then clamp into [0, 255].
std::uint8_t quantize_u8(double v) noexcept;

/// Number of mask samples strictly greater than zero.
std::size_t support_size(const SoftMask& mask) noexcept;

/// Throws non-finite-values when any sample is NaN or infinite.
void require_finite(const HdrImage& img);

}  // namespace hdrboost
