// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hdrboost/image.hpp"

namespace hdrboost {

/// scale(i) = min(s0 + ds (i - 1), cap), i >= 1
struct CompensationSchedule {
  double s0 = 0.2;
  double ds = 0.1;
  double cap = 1.0;

  void validate() const;
};

double compensation_scale(const CompensationSchedule& schedule, int iteration);

/// Residuals within this many intensity levels count as meeting the bound.
inline constexpr float kResidualDeadband = 0.5f;

/// Signed luminance(baseline) - luminance(aligned). Positive where the
/// aligned frame is darker than the baseline lower bound.
LumaImage compute_residual(const LdrImage& baseline, const LdrImage& aligned);

/// Y' = Y_aligned + residual * mask * scale, written back with chroma kept.
/// Pixels with mask 0 come back unchanged.
LdrImage apply_compensation(const LdrImage& aligned, const LumaImage& residual, const SoftMask& mask, double scale);

/// Keeps mask values where residual > deadband, zeroes the rest.
SoftMask shrink_mask(const SoftMask& mask, const LumaImage& residual, float deadband = kResidualDeadband);

/// Largest residual over pixels where mask > 0; 0 when none is positive.
float max_positive_residual(const LumaImage& residual, const SoftMask& mask);

/// Pointwise maximum; combines per-EV residuals into one mask update.
LumaImage pointwise_max(const LumaImage& a, const LumaImage& b);

}  // namespace hdrboost
