// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "hdrboost/tonemap.hpp"
#include "synthetic.hpp"

using namespace hdrboost;
using namespace hdrboost::testing;

namespace {

int encode(double v) { return int(std::lround(255.0 * std::pow(std::clamp(v, 0.0, 1.0), 1.0 / 2.2))); }

HdrImage scaled(const HdrImage& h, float k) {
  HdrImage out = h;
  for (auto& v : out.data()) v *= k;
  return out;
}

HdrImage gray_ramp(std::size_t n, double stops) {
  HdrImage h(n, 1);
  for (std::size_t x = 0; x < n; ++x) {
    const float v = float(std::exp2(stops * x / (n - 1)));
    h[3 * x] = h[3 * x + 1] = h[3 * x + 2] = v;
  }
  return h;
}

}  // namespace

TEST_CASE("Reinhard on a uniform image") {
  const float l = 0.3f;
  const HdrImage h(8, 8, l);
  // Default white is the scene max, so L' = key and the curve reaches 1.
  CHECK(int(tonemap_reinhard(h)[0]) == 255);

  ReinhardParams p;
  p.white = 10.0 * l;
  const double lbar = 1e-6 + l;
  const double lm = 0.18 * l / lbar, lw = 0.18 * *p.white / lbar;
  const double ld = lm * (1.0 + lm / (lw * lw)) / (1.0 + lm);
  CHECK(int(tonemap_reinhard(h, p)[5]) == encode(ld));
}

TEST_CASE("Reinhard burns out above the white point") {
  HdrImage h(2, 1, 1.0f);
  h[3] = h[4] = h[5] = 1e6f;
  ReinhardParams p;
  p.white = 2.0;
  CHECK(int(tonemap_reinhard(h, p)[3]) == 255);
}

TEST_CASE("operators are exposure invariant") {
  const HdrImage h = log_ramp_radiance(64, 64, 1e-3);
  for (float k : {2.0f, 10.0f, 0.01f}) {
    for (ToneMapper op : {ToneMapper::reinhard, ToneMapper::kimkautz}) {
      const LdrImage a = tonemap(h, op), b = tonemap(scaled(h, k), op);
      for (std::size_t i = 0; i < a.data().size(); ++i) REQUIRE(std::abs(int(a[i]) - int(b[i])) <= 1);
    }
  }
}

TEST_CASE("operators are monotone in luminance") {
  const HdrImage ramp = gray_ramp(500, 12);
  for (ToneMapper op : {ToneMapper::reinhard, ToneMapper::kimkautz}) {
    const LdrImage out = tonemap(ramp, op);
    for (std::size_t x = 1; x < 500; ++x) REQUIRE(out[3 * x] >= out[3 * (x - 1)]);
    CHECK(out[0] < out[3 * 499]);
  }
}

TEST_CASE("Kim-Kautz centers a constant image") {
  const LdrImage out = tonemap_kimkautz(HdrImage(4, 4, 123.0f));
  CHECK(int(out[0]) == encode(std::pow(10.0, -1.3)));
}

TEST_CASE("Kim-Kautz slope stays positive and bounded") {
  const KimKautzParams p;
  for (double range : {0.5, 2.0, 6.0}) {
    for (double dx : {-2.0, -0.3, 0.0, 0.7, 2.5}) {
      const double gap = kimkautz_curve(dx + std::log10(2.0), range, p) - kimkautz_curve(dx, range, p);
      const double slope = gap / std::log10(2.0);
      CHECK(slope > 0.0);
      CHECK(slope <= p.c1);
    }
  }
  // Ranges the display can hold map linearly with slope c2.
  CHECK(kimkautz_curve(1.0, 1.0, p) == doctest::Approx(p.c2));
}

TEST_CASE("black input is rejected") {
  CHECK_THROWS_WITH_AS(tonemap_reinhard(HdrImage(3, 3, 0.0f)), doctest::Contains("all-black-input"), Error);
  CHECK_THROWS_WITH_AS(tonemap_kimkautz(HdrImage(3, 3, 0.0f)), doctest::Contains("all-black-input"), Error);
}

TEST_CASE("tone mapper names") {
  CHECK(parse_tone_mapper("reinhard") == ToneMapper::reinhard);
  CHECK(parse_tone_mapper("kimkautz") == ToneMapper::kimkautz);
  CHECK_THROWS_AS(parse_tone_mapper("drago"), Error);
}
