// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string_view>

#include "hdrboost/kernels.hpp"

namespace hdrboost::kernels {

#if defined(HDRBOOST_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

const KernelTable* avx2() {
#if defined(HDRBOOST_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("HDRBOOST_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar();
    if (const KernelTable* t = avx2()) return t;
    return &scalar();
  }();
  return *chosen;
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar()};
  if (const KernelTable* t = avx2()) out.push_back(t);
  return out;
}

}  // namespace hdrboost::kernels
