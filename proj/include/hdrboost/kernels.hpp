// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

// Per-pixel inner loops. Every entry has a scalar reference implementation;
// SIMD variants must produce bit-identical output and are picked once at
// startup according to what the CPU supports. Setting HDRBOOST_SIMD=scalar
// in the environment forces the reference path.
namespace hdrboost::kernels {

struct KernelTable {
  const char* name;

  // out[i] = luma of the interleaved RGB triple i.
  void (*luma_rgb8)(const std::uint8_t* rgb, float* out, std::size_t n);
  void (*luma_rgbf)(const float* rgb, float* out, std::size_t n);

  // out[i] = max(0, max_c(rgb[i,c]) - tau) / (255 - tau)
  void (*soft_mask_rgb8)(const std::uint8_t* rgb, float tau, float* out, std::size_t n);

  // out[i] = a[i] - b[i]
  void (*subtract)(const float* a, const float* b, float* out, std::size_t n);

  // out[i] = luma[i] + residual[i] * mask[i] * scale
  void (*compensate)(const float* luma, const float* residual, const float* mask, float scale, float* out,
                     std::size_t n);

  // out[i] = residual[i] > deadband ? mask[i] : 0
  void (*shrink_mask)(const float* mask, const float* residual, float deadband, float* out, std::size_t n);

  // For each of the 3n interleaved samples z with channel c:
  //   num += w[z] * (g[c * 256 + z] - log_time);  den += w[z]
  void (*merge_accumulate)(const std::uint8_t* rgb, const double* g, const double* w, double log_time, double* num,
                           double* den, std::size_t n);
};

const KernelTable& scalar();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2();

/// The table used by the library.
const KernelTable& active();

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available();

}  // namespace hdrboost::kernels
