// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "hdrboost/compensate.hpp"

using namespace hdrboost;

namespace {

LdrImage gray(std::uint8_t v, std::size_t w = 1, std::size_t h = 1) { return LdrImage(w, h, v); }

}  // namespace

TEST_CASE("residual is signed baseline minus aligned") {
  CHECK(compute_residual(gray(250), gray(200))[0] == 50.0f);
  CHECK(compute_residual(gray(200), gray(250))[0] == -50.0f);
  const LdrImage a(3, 2, std::vector<std::uint8_t>(18, 77));
  const LumaImage zero = compute_residual(a, a);
  for (float r : zero.data()) CHECK(r == 0.0f);
  CHECK_THROWS_WITH_AS(compute_residual(gray(1, 2, 2), gray(1, 3, 2)), doctest::Contains("dimension-mismatch"), Error);
}

TEST_CASE("compensation update") {
  CHECK(apply_compensation(gray(200), LumaImage(1, 1, 50.0f), SoftMask(1, 1, 1.0f), 0.5)[0] == 225);
  const LdrImage out = apply_compensation(gray(100), LumaImage(1, 1, 50.0f), SoftMask(1, 1, 0.5f), 0.2);
  CHECK(luminance(out)[0] - 100.0f == doctest::Approx(5.0));

  LdrImage img(4, 4);
  for (std::size_t i = 0; i < img.data().size(); ++i) img[i] = std::uint8_t(i * 5);
  CHECK(apply_compensation(img, LumaImage(4, 4, 40.0f), SoftMask(4, 4, 0.0f), 1.0) == img);

  CHECK_THROWS_AS(apply_compensation(gray(1), LumaImage(1, 1), SoftMask(1, 1), 0.0), Error);
  CHECK_THROWS_AS(apply_compensation(gray(1), LumaImage(1, 1), SoftMask(1, 1), 1.5), Error);
}

TEST_CASE("compensation never overshoots the bound") {
  for (int y = 0; y <= 250; y += 10) {
    for (float r : {-30.0f, 0.0f, 5.0f, 55.0f}) {
      if (y + r > 255 || y + r < 0) continue;
      const LdrImage out = apply_compensation(gray(std::uint8_t(y)), LumaImage(1, 1, r), SoftMask(1, 1, 1.0f), 1.0);
      CHECK(std::abs(luminance(out)[0] - (y + r)) <= 0.5f);
    }
  }
}

TEST_CASE("mask shrinks only where the bound holds") {
  const SoftMask m(2, 2, std::vector<float>{1.0f, 0.6f, 0.3f, 0.9f});
  const SoftMask all_neg = shrink_mask(m, LumaImage(2, 2, -4.0f));
  for (float v : all_neg.data()) CHECK(v == 0.0f);
  CHECK(shrink_mask(m, LumaImage(2, 2, 12.0f)) == m);

  const LumaImage mixed(2, 2, std::vector<float>{3.0f, -1.0f, 0.5f, 0.51f});
  const SoftMask s = shrink_mask(m, mixed);
  CHECK(s[0] == 1.0f);
  CHECK(s[1] == 0.0f);
  CHECK(s[2] == 0.0f);  // inside the dead-band counts as satisfied
  CHECK(s[3] == 0.9f);
  CHECK(support_size(s) < support_size(m));
}

TEST_CASE("compensation schedule") {
  const CompensationSchedule s;
  CHECK(compensation_scale(s, 1) == doctest::Approx(0.2));
  CHECK(compensation_scale(s, 4) == doctest::Approx(0.5));
  CHECK(compensation_scale(s, 20) == 1.0);
  CHECK_THROWS_AS(compensation_scale(s, 0), Error);
  CHECK_THROWS_AS((CompensationSchedule{0.0, 0.1, 1.0}.validate()), Error);
}

TEST_CASE("max positive residual over the mask support") {
  const LumaImage r(3, 1, std::vector<float>{90.0f, 20.0f, -5.0f});
  CHECK(max_positive_residual(r, SoftMask(3, 1, std::vector<float>{0.0f, 1.0f, 1.0f})) == 20.0f);
  CHECK(max_positive_residual(r, SoftMask(3, 1, 0.0f)) == 0.0f);
  CHECK(pointwise_max(r, LumaImage(3, 1, 0.0f))[2] == 0.0f);
}
