// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/image.hpp"

#include <algorithm>
#include <cmath>

#include "hdrboost/kernels.hpp"

namespace hdrboost {

std::uint8_t quantize_u8(double v) noexcept {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::round(v));
}

LumaImage luminance(const LdrImage& img) {
  LumaImage out(img.width(), img.height());
  kernels::active().luma_rgb8(img.data().data(), out.data().data(), img.pixel_count());
  return out;
}

LumaImage luminance(const HdrImage& img) {
  LumaImage out(img.width(), img.height());
  kernels::active().luma_rgbf(img.data().data(), out.data().data(), img.pixel_count());
  return out;
}

LdrImage replace_luminance(const LdrImage& img, const LumaImage& new_luma) {
  require_same_size(img, new_luma, "replace_luminance: luminance plane does not match image");
  const LumaImage old_luma = luminance(img);
  LdrImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double target = new_luma[i];
    if (!std::isfinite(target)) throw Error(Errc::invalid_argument, "replace_luminance: non-finite luminance");
    const std::uint8_t* src = img.data().data() + 3 * i;
    std::uint8_t* dst = out.data().data() + 3 * i;
    const double current = old_luma[i];
    if (current <= 0.0) {
      std::fill_n(dst, 3, quantize_u8(target));
      continue;
    }
    const double gain = target / current;
    for (int c = 0; c < 3; ++c) dst[c] = quantize_u8(src[c] * gain);
  }
  return out;
}

std::size_t support_size(const SoftMask& mask) noexcept {
  return static_cast<std::size_t>(std::count_if(mask.data().begin(), mask.data().end(), [](float v) { return v > 0.0f; }));
}

void require_finite(const HdrImage& img) {
  for (float v : img.data()) {
    if (!std::isfinite(v)) throw Error(Errc::non_finite_values, "image contains NaN or infinite samples");
  }
}

}  // namespace hdrboost
