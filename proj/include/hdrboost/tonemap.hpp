// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>

#include "hdrboost/image.hpp"

namespace hdrboost {

struct ReinhardParams {
  double key = 0.18;
  // Scene luminance that maps to white; defaults to the brightest pixel.
  std::optional<double> white;
  double epsilon = 1e-6;
  double display_gamma = 2.2;

  void validate() const;
};

struct KimKautzParams {
  double c1 = 3.0;                // scene range / c1 is the width of the Gaussian gain window
  double c2 = 0.5;                // overall contrast of the display mapping
  double display_range = 2.6;     // log10 units
  double display_gamma = 2.2;

  void validate() const;
};

/// Global photographic operator:
///   Lm = key / Lavg * Lw,  Ld = Lm (1 + Lm / Lwhite^2) / (1 + Lm)
/// with Lavg the log-average luminance and Lwhite expressed on the Lm scale.
/// Throws all-black-input when no pixel carries light.
LdrImage tonemap_reinhard(const HdrImage& hdr, const ReinhardParams& p = {});

/// Consistent global operator in log10 luminance. Around the mean log
/// luminance mu the local slope is c2 * k(x), where
///   k(x) = (1 - k1) exp(-(x - mu)^2 / (2 sigma^2)) + k1,
///   k1 = min(1, display_range / scene_range),  sigma = scene_range / c1.
/// The display log luminance is the integral of that slope from mu, so the
/// map is monotone and mu lands on the middle of the display range.
LdrImage tonemap_kimkautz(const HdrImage& hdr, const KimKautzParams& p = {});

/// Display log10 luminance offset from the middle of the range for an input
/// at log10 distance `dx` from the scene mean. Exposed for tests.
double kimkautz_curve(double dx, double scene_range, const KimKautzParams& p);

enum class ToneMapper { reinhard, kimkautz };
ToneMapper parse_tone_mapper(std::string_view name);
LdrImage tonemap(const HdrImage& hdr, ToneMapper op);

}  // namespace hdrboost
