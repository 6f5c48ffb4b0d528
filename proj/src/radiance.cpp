// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/radiance.hpp"

#include <cmath>
#include <limits>

#include "hdrboost/kernels.hpp"

namespace hdrboost {

HdrImage merge_hdr(const ExposureStack& stack, const InverseCrf& crf) {
  if (stack.empty()) throw Error(Errc::invalid_argument, "cannot merge an empty stack");
  const std::size_t n = stack.width() * stack.height();

  std::vector<double> lut(3 * 256);
  for (int c = 0; c < 3; ++c) {
    for (int z = 0; z < 256; ++z) lut[c * 256 + z] = crf.g(c, z);
  }
  std::vector<double> num(3 * n, 0.0), den(3 * n, 0.0);
  const auto& k = kernels::active();
  for (const auto& f : stack.frames()) {
    k.merge_accumulate(f.image.data().data(), lut.data(), hat_weights().data(), std::log(f.time), num.data(),
                       den.data(), n);
  }

  const ExposureFrame& fallback = stack.least_exposed();
  const double fallback_log_time = std::log(fallback.time);
  HdrImage out(stack.width(), stack.height());
  auto dst = out.data();
  for (std::size_t i = 0; i < 3 * n; ++i) {
    const double log_e = den[i] > 0.0 ? num[i] / den[i] : lut[(i % 3) * 256 + fallback.image[i]] - fallback_log_time;
    const double e = std::exp(log_e);
    dst[i] = static_cast<float>(std::min(e, static_cast<double>(std::numeric_limits<float>::max())));
  }
  return out;
}

ExposureStack reproject_stack(const HdrImage& hdr, const InverseCrf& crf, const std::vector<int>& evs) {
  require_finite(hdr);
  if (evs.empty()) throw Error(Errc::invalid_argument, "EV list is empty");
  const auto src = hdr.data();
  std::vector<double> log_e(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    log_e[i] = src[i] > 0.0f ? std::log(static_cast<double>(src[i])) : -std::numeric_limits<double>::infinity();
  }
  std::vector<std::pair<int, LdrImage>> frames;
  for (int ev : evs) {
    const double shift = ev * std::log(2.0);
    LdrImage img(hdr.width(), hdr.height());
    auto dst = img.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = crf.forward(log_e[i] + shift, static_cast<int>(i % 3));
    frames.emplace_back(ev, std::move(img));
  }
  return ExposureStack(std::move(frames));
}

}  // namespace hdrboost
