// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "hdrboost/image.hpp"
#include "hdrboost/kernels.hpp"

namespace hdrboost::kernels {
namespace {

// Written as g + wr*(r-g) + wb*(b-g) so that gray inputs come back exactly.
inline float luma(float r, float g, float b) { return g + kLumaR * (r - g) + kLumaB * (b - g); }

void luma_rgb8(const std::uint8_t* rgb, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i, rgb += 3) {
    out[i] = luma(static_cast<float>(rgb[0]), static_cast<float>(rgb[1]), static_cast<float>(rgb[2]));
  }
}

void luma_rgbf(const float* rgb, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i, rgb += 3) out[i] = luma(rgb[0], rgb[1], rgb[2]);
}

void soft_mask_rgb8(const std::uint8_t* rgb, float tau, float* out, std::size_t n) {
  const float denom = 255.0f - tau;
  for (std::size_t i = 0; i < n; ++i, rgb += 3) {
    const float peak = static_cast<float>(std::max({rgb[0], rgb[1], rgb[2]}));
    out[i] = std::max(peak - tau, 0.0f) / denom;
  }
}

void subtract(const float* a, const float* b, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void compensate(const float* y, const float* r, const float* m, float scale, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + r[i] * m[i] * scale;
}

void shrink_mask(const float* m, const float* r, float deadband, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = r[i] > deadband ? m[i] : 0.0f;
}

void merge_accumulate(const std::uint8_t* rgb, const double* g, const double* w, double log_time, double* num,
                      double* den, std::size_t n) {
  for (std::size_t i = 0; i < 3 * n; ++i) {
    const std::size_t z = rgb[i];
    const double wz = w[z];
    num[i] += wz * (g[(i % 3) * 256 + z] - log_time);
    den[i] += wz;
  }
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{
      "scalar", luma_rgb8, luma_rgbf, soft_mask_rgb8, subtract, compensate, shrink_mask, merge_accumulate,
  };
  return table;
}

}  // namespace hdrboost::kernels
