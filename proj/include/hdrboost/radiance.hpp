// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hdrboost/crf.hpp"

namespace hdrboost {

/// Weighted log-domain merge:
///   ln E = sum_j w(Z_j) (g(Z_j) - ln t_j) / sum_j w(Z_j)
/// Samples clipped in every frame (zero total weight) fall back to the
/// least-exposed frame with unit weight.
HdrImage merge_hdr(const ExposureStack& stack, const InverseCrf& crf);

/// Renders one frame per EV from a radiance map: Z = forward(ln E + ev ln 2).
ExposureStack reproject_stack(const HdrImage& hdr, const InverseCrf& crf, const std::vector<int>& evs);

}  // namespace hdrboost
