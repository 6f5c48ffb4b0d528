// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 only. Arithmetic mirrors kernels_scalar.cpp operation
// for operation (no FMA) so results are bit-identical.

#include <immintrin.h>

#include <cstring>

#include "hdrboost/image.hpp"
#include "hdrboost/kernels.hpp"

namespace hdrboost::kernels {
namespace {

// Byte offsets of 8 consecutive RGB pixels.
inline __m256i rgb8_offsets() { return _mm256_setr_epi32(0, 3, 6, 9, 12, 15, 18, 21); }

// Loads r, g, b of 8 pixels as floats. Reads one byte past the 8th pixel, so
// callers keep at least one pixel in the tail.
inline void load_rgb8(const std::uint8_t* rgb, __m256& r, __m256& g, __m256& b) {
  const __m256i packed = _mm256_i32gather_epi32(reinterpret_cast<const int*>(rgb), rgb8_offsets(), 1);
  const __m256i lo = _mm256_set1_epi32(0xFF);
  r = _mm256_cvtepi32_ps(_mm256_and_si256(packed, lo));
  g = _mm256_cvtepi32_ps(_mm256_and_si256(_mm256_srli_epi32(packed, 8), lo));
  b = _mm256_cvtepi32_ps(_mm256_and_si256(_mm256_srli_epi32(packed, 16), lo));
}

inline __m256 luma8(__m256 r, __m256 g, __m256 b) {
  const __m256 wr = _mm256_set1_ps(kLumaR);
  const __m256 wb = _mm256_set1_ps(kLumaB);
  __m256 y = _mm256_add_ps(g, _mm256_mul_ps(wr, _mm256_sub_ps(r, g)));
  return _mm256_add_ps(y, _mm256_mul_ps(wb, _mm256_sub_ps(b, g)));
}

void luma_rgb8(const std::uint8_t* rgb, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 < n; i += 8) {
    __m256 r, g, b;
    load_rgb8(rgb + 3 * i, r, g, b);
    _mm256_storeu_ps(out + i, luma8(r, g, b));
  }
  scalar().luma_rgb8(rgb + 3 * i, out + i, n - i);
}

void luma_rgbf(const float* rgb, float* out, std::size_t n) {
  const __m256i idx = rgb8_offsets();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const float* p = rgb + 3 * i;
    const __m256 r = _mm256_i32gather_ps(p, idx, 4);
    const __m256 g = _mm256_i32gather_ps(p + 1, idx, 4);
    const __m256 b = _mm256_i32gather_ps(p + 2, idx, 4);
    _mm256_storeu_ps(out + i, luma8(r, g, b));
  }
  scalar().luma_rgbf(rgb + 3 * i, out + i, n - i);
}

void soft_mask_rgb8(const std::uint8_t* rgb, float tau, float* out, std::size_t n) {
  const __m256 vtau = _mm256_set1_ps(tau);
  const __m256 denom = _mm256_set1_ps(255.0f - tau);
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 < n; i += 8) {
    __m256 r, g, b;
    load_rgb8(rgb + 3 * i, r, g, b);
    const __m256 peak = _mm256_max_ps(r, _mm256_max_ps(g, b));
    _mm256_storeu_ps(out + i, _mm256_div_ps(_mm256_max_ps(_mm256_sub_ps(peak, vtau), zero), denom));
  }
  scalar().soft_mask_rgb8(rgb + 3 * i, tau, out + i, n - i);
}

void subtract(const float* a, const float* b, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i, _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
  }
  scalar().subtract(a + i, b + i, out + i, n - i);
}

void compensate(const float* y, const float* r, const float* m, float scale, float* out, std::size_t n) {
  const __m256 s = _mm256_set1_ps(scale);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 delta = _mm256_mul_ps(_mm256_mul_ps(_mm256_loadu_ps(r + i), _mm256_loadu_ps(m + i)), s);
    _mm256_storeu_ps(out + i, _mm256_add_ps(_mm256_loadu_ps(y + i), delta));
  }
  scalar().compensate(y + i, r + i, m + i, scale, out + i, n - i);
}

void shrink_mask(const float* m, const float* r, float deadband, float* out, std::size_t n) {
  const __m256 db = _mm256_set1_ps(deadband);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 keep = _mm256_cmp_ps(_mm256_loadu_ps(r + i), db, _CMP_GT_OQ);
    _mm256_storeu_ps(out + i, _mm256_and_ps(keep, _mm256_loadu_ps(m + i)));
  }
  scalar().shrink_mask(m + i, r + i, deadband, out + i, n - i);
}

void merge_accumulate(const std::uint8_t* rgb, const double* g, const double* w, double log_time, double* num,
                      double* den, std::size_t n) {
  // Channel of sample k is k % 3; blocks of four start at k % 3 = 0, 1, 2 in turn.
  const __m128i channel_base[3] = {
      _mm_setr_epi32(0, 256, 512, 0),
      _mm_setr_epi32(256, 512, 0, 256),
      _mm_setr_epi32(512, 0, 256, 512),
  };
  const __m256d lt = _mm256_set1_pd(log_time);
  const std::size_t total = 3 * n;
  std::size_t k = 0;
  for (int phase = 0; k + 4 <= total; k += 4, phase = (phase + 1) % 3) {
    int packed;
    std::memcpy(&packed, rgb + k, sizeof(packed));
    const __m128i z = _mm_cvtepu8_epi32(_mm_cvtsi32_si128(packed));
    const __m256d wz = _mm256_i32gather_pd(w, z, 8);
    const __m256d gz = _mm256_i32gather_pd(g, _mm_add_epi32(z, channel_base[phase]), 8);
    const __m256d term = _mm256_mul_pd(wz, _mm256_sub_pd(gz, lt));
    _mm256_storeu_pd(num + k, _mm256_add_pd(_mm256_loadu_pd(num + k), term));
    _mm256_storeu_pd(den + k, _mm256_add_pd(_mm256_loadu_pd(den + k), wz));
  }
  for (; k < total; ++k) {
    const std::size_t z = rgb[k];
    const double wz = w[z];
    num[k] += wz * (g[(k % 3) * 256 + z] - log_time);
    den[k] += wz;
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{
      "avx2", luma_rgb8, luma_rgbf, soft_mask_rgb8, subtract, compensate, shrink_mask, merge_accumulate,
  };
  return table;
}

}  // namespace hdrboost::kernels
