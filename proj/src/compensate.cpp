// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/compensate.hpp"

#include <algorithm>
#include <cmath>

#include "hdrboost/kernels.hpp"

namespace hdrboost {

void CompensationSchedule::validate() const {
  if (!(s0 > 0.0) || !(ds >= 0.0) || !(cap > 0.0) || cap > 1.0 || s0 > cap) {
    throw Error(Errc::invalid_argument, "compensation schedule needs 0 < s0 <= cap <= 1 and ds >= 0");
  }
}

double compensation_scale(const CompensationSchedule& schedule, int iteration) {
  if (iteration < 1) throw Error(Errc::invalid_argument, "iterations are numbered from 1");
  return std::min(schedule.s0 + schedule.ds * (iteration - 1), schedule.cap);
}

LumaImage compute_residual(const LdrImage& baseline, const LdrImage& aligned) {
  require_same_size(baseline, aligned, "compute_residual: frames differ in size");
  const LumaImage yb = luminance(baseline);
  const LumaImage ya = luminance(aligned);
  LumaImage out(baseline.width(), baseline.height());
  kernels::active().subtract(yb.data().data(), ya.data().data(), out.data().data(), out.pixel_count());
  return out;
}

LdrImage apply_compensation(const LdrImage& aligned, const LumaImage& residual, const SoftMask& mask, double scale) {
  require_same_size(aligned, residual, "apply_compensation: residual differs in size");
  require_same_size(aligned, mask, "apply_compensation: mask differs in size");
  if (!(scale > 0.0 && scale <= 1.0)) throw Error(Errc::invalid_argument, "compensation scale must lie in (0, 1]");
  const LumaImage y = luminance(aligned);
  LumaImage target(aligned.width(), aligned.height());
  kernels::active().compensate(y.data().data(), residual.data().data(), mask.data().data(),
                               static_cast<float>(scale), target.data().data(), target.pixel_count());
  return replace_luminance(aligned, target);
}

SoftMask shrink_mask(const SoftMask& mask, const LumaImage& residual, float deadband) {
  require_same_size(mask, residual, "shrink_mask: residual differs in size");
  SoftMask out(mask.width(), mask.height());
  kernels::active().shrink_mask(mask.data().data(), residual.data().data(), deadband, out.data().data(),
                                out.pixel_count());
  return out;
}

float max_positive_residual(const LumaImage& residual, const SoftMask& mask) {
  require_same_size(mask, residual, "max_positive_residual: mask differs in size");
  float best = 0.0f;
  for (std::size_t i = 0; i < residual.pixel_count(); ++i) {
    if (mask[i] > 0.0f) best = std::max(best, residual[i]);
  }
  return best;
}

LumaImage pointwise_max(const LumaImage& a, const LumaImage& b) {
  require_same_size(a, b, "pointwise_max: planes differ in size");
  LumaImage out(a.width(), a.height());
  for (std::size_t i = 0; i < a.pixel_count(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

}  // namespace hdrboost
