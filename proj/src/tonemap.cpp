// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/tonemap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hdrboost {

namespace {

// Applies per-pixel display luminance with channel ratios preserved.
template <class DisplayLuma>
LdrImage map_luminance(const HdrImage& hdr, const LumaImage& luma, double display_gamma, DisplayLuma&& display) {
  LdrImage out(hdr.width(), hdr.height());
  const double inv_gamma = 1.0 / display_gamma;
  for (std::size_t i = 0; i < hdr.pixel_count(); ++i) {
    const double lw = luma[i];
    if (!(lw > 0.0)) continue;
    const double ratio = display(i, lw) / lw;
    for (int c = 0; c < 3; ++c) {
      const double v = std::clamp(hdr[3 * i + c] * ratio, 0.0, 1.0);
      out[3 * i + c] = quantize_u8(255.0 * std::pow(v, inv_gamma));
    }
  }
  return out;
}

void require_light(const LumaImage& luma) {
  if (std::none_of(luma.data().begin(), luma.data().end(), [](float v) { return v > 0.0f; })) {
    throw Error(Errc::all_black_input, "radiance map carries no light");
  }
}

}  // namespace

void ReinhardParams::validate() const {
  if (!(key > 0.0)) throw Error(Errc::invalid_argument, "Reinhard key must be positive");
  if (white && !(*white > 0.0)) throw Error(Errc::invalid_argument, "Reinhard white point must be positive");
  if (!(epsilon >= 0.0) || !(display_gamma > 0.0)) throw Error(Errc::invalid_argument, "bad Reinhard parameters");
}

void KimKautzParams::validate() const {
  if (!(c1 > 0.0)) throw Error(Errc::invalid_argument, "Kim-Kautz c1 must be positive");
  if (!(c2 > 0.0 && c2 <= 1.0)) throw Error(Errc::invalid_argument, "Kim-Kautz c2 must lie in (0, 1]");
  if (!(display_range > 0.0) || !(display_gamma > 0.0)) throw Error(Errc::invalid_argument, "bad Kim-Kautz parameters");
}

LdrImage tonemap_reinhard(const HdrImage& hdr, const ReinhardParams& p) {
  p.validate();
  require_finite(hdr);
  const LumaImage luma = luminance(hdr);
  require_light(luma);

  double log_sum = 0.0;
  double peak = 0.0;
  for (float v : luma.data()) {
    const double lw = std::max(0.0f, v);
    log_sum += std::log(p.epsilon + lw);
    peak = std::max(peak, lw);
  }
  const double log_avg = std::exp(log_sum / static_cast<double>(luma.pixel_count()));
  const double scale = p.key / log_avg;
  const double white = scale * p.white.value_or(peak);
  const double inv_white2 = 1.0 / (white * white);

  return map_luminance(hdr, luma, p.display_gamma, [&](std::size_t, double lw) {
    const double lm = scale * lw;
    return lm * (1.0 + lm * inv_white2) / (1.0 + lm);
  });
}

double kimkautz_curve(double dx, double scene_range, const KimKautzParams& p) {
  const double k1 = scene_range > 0.0 ? std::min(1.0, p.display_range / scene_range) : 1.0;
  const double sigma = scene_range / p.c1;
  double integral = k1 * dx;
  if (sigma > 0.0) {
    integral += (1.0 - k1) * sigma * std::sqrt(std::numbers::pi / 2.0) * std::erf(dx / (sigma * std::numbers::sqrt2));
  } else {
    integral = dx;
  }
  return p.c2 * integral;
}

LdrImage tonemap_kimkautz(const HdrImage& hdr, const KimKautzParams& p) {
  p.validate();
  require_finite(hdr);
  const LumaImage luma = luminance(hdr);
  require_light(luma);

  double sum = 0.0, lo = INFINITY, hi = -INFINITY;
  std::size_t lit = 0;
  for (float v : luma.data()) {
    if (!(v > 0.0f)) continue;
    const double x = std::log10(static_cast<double>(v));
    sum += x;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    ++lit;
  }
  const double mu = sum / static_cast<double>(lit);
  const double range = hi - lo;
  const double half = p.display_range / 2.0;

  return map_luminance(hdr, luma, p.display_gamma, [&](std::size_t, double lw) {
    const double y = kimkautz_curve(std::log10(lw) - mu, range, p);
    return std::pow(10.0, y - half);
  });
}

ToneMapper parse_tone_mapper(std::string_view name) {
  if (name == "reinhard") return ToneMapper::reinhard;
  if (name == "kimkautz") return ToneMapper::kimkautz;
  throw Error(Errc::invalid_argument, "unknown tone mapper '" + std::string(name) + "'");
}

LdrImage tonemap(const HdrImage& hdr, ToneMapper op) {
  return op == ToneMapper::reinhard ? tonemap_reinhard(hdr) : tonemap_kimkautz(hdr);
}

}  // namespace hdrboost
