// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "hdrboost/image_io.hpp"
#include "synthetic.hpp"

using namespace hdrboost;
using namespace hdrboost::testing;
namespace fs = std::filesystem;

TEST_CASE("image buffers check their length") {
  CHECK_THROWS_AS(LdrImage(2, 2, std::vector<std::uint8_t>(11)), Error);
  const LdrImage img(2, 1, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
  CHECK(img.pixel(1, 0)[2] == 6);
  CHECK(img.pixel_count() == 2);
}

TEST_CASE("luminance uses BT.601 weights") {
  const LdrImage img(3, 1, std::vector<std::uint8_t>{255, 255, 255, 0, 0, 0, 100, 200, 50});
  const LumaImage y = luminance(img);
  CHECK(y[0] == 255.0f);
  CHECK(y[1] == 0.0f);
  CHECK(y[2] == doctest::Approx(0.299 * 100 + 0.587 * 200 + 0.114 * 50).epsilon(1e-6));
  CHECK(y[2] == doctest::Approx(153.0).epsilon(1e-6));
}

TEST_CASE("gray pixels keep their value exactly") {
  std::vector<std::uint8_t> px;
  for (int v = 0; v < 256; ++v) px.insert(px.end(), {std::uint8_t(v), std::uint8_t(v), std::uint8_t(v)});
  const LumaImage y = luminance(LdrImage(256, 1, px));
  for (int v = 0; v < 256; ++v) CHECK(y[v] == float(v));
}

TEST_CASE("HDR luminance is linear") {
  HdrImage a(4, 1), b(4, 1);
  const float vals[12] = {0.1f, 2.f, 3.f, 0.5f, 0.25f, 0.125f, 7.f, 0.f, 1.f, 4.f, 4.f, 4.f};
  for (int i = 0; i < 12; ++i) {
    a[i] = vals[i];
    b[i] = 4.0f * vals[i];
  }
  const LumaImage ya = luminance(a), yb = luminance(b);
  for (int i = 0; i < 4; ++i) CHECK(yb[i] == doctest::Approx(4.0 * ya[i]).epsilon(1e-6));
}

TEST_CASE("replace_luminance scales channels") {
  SUBCASE("gray") {
    const LdrImage img(1, 1, std::vector<std::uint8_t>{100, 100, 100});
    const LdrImage out = replace_luminance(img, LumaImage(1, 1, 150.0f));
    CHECK(out == LdrImage(1, 1, std::vector<std::uint8_t>{150, 150, 150}));
  }
  SUBCASE("chroma preserved") {
    const LdrImage img(1, 1, std::vector<std::uint8_t>{200, 100, 0});
    const double old_y = 0.299 * 200 + 0.587 * 100;
    const LdrImage out = replace_luminance(img, LumaImage(1, 1, float(1.2 * old_y)));
    CHECK(int(out[0]) == 240);
    CHECK(int(out[1]) == 120);
    CHECK(int(out[2]) == 0);
  }
  SUBCASE("identity within one level") {
    LdrImage img(16, 16);
    for (std::size_t i = 0; i < img.data().size(); ++i) img[i] = std::uint8_t((i * 37) % 256);
    const LdrImage out = replace_luminance(img, luminance(img));
    for (std::size_t i = 0; i < img.data().size(); ++i) CHECK(std::abs(int(out[i]) - int(img[i])) <= 1);
  }
  SUBCASE("black pixel becomes gray") {
    const LdrImage out = replace_luminance(LdrImage(1, 1), LumaImage(1, 1, 42.0f));
    CHECK(out == LdrImage(1, 1, std::vector<std::uint8_t>{42, 42, 42}));
  }
  SUBCASE("luminance recovered where nothing clamps") {
    const LdrImage img(1, 1, std::vector<std::uint8_t>{90, 60, 30});
    const LdrImage out = replace_luminance(img, LumaImage(1, 1, 100.0f));
    CHECK(std::abs(luminance(out)[0] - 100.0f) <= 1.0f);
  }
  CHECK_THROWS_AS(replace_luminance(LdrImage(2, 1), LumaImage(1, 1)), Error);
  CHECK_THROWS_AS(replace_luminance(LdrImage(1, 1), LumaImage(1, 1, NAN)), Error);
}

TEST_CASE("PNG round trip") {
  TempDir dir("png");
  const LdrImage bw(2, 1, std::vector<std::uint8_t>{0, 0, 0, 255, 255, 255});
  save_ldr(bw, dir / "bw.png");
  CHECK(load_ldr(dir / "bw.png") == bw);

  LdrImage noise(37, 23);
  for (std::size_t i = 0; i < noise.data().size(); ++i) noise[i] = std::uint8_t((i * 2654435761u) >> 24);
  save_ldr(noise, dir / "noise.png");
  CHECK(load_ldr(dir / "noise.png") == noise);

  const LdrImage one(1, 1, std::vector<std::uint8_t>{1, 2, 3});
  save_ldr(one, dir / "one.png");
  const LdrImage back = load_ldr(dir / "one.png");
  CHECK(back.width() == 1);
  CHECK(back.height() == 1);
}

TEST_CASE("PNG errors") {
  TempDir dir("png_err");
  CHECK_THROWS_WITH_AS(load_ldr(dir / "absent.png"), doctest::Contains("file-missing"), Error);
  {
    std::ofstream(dir / "junk.png") << "not a png";
  }
  CHECK_THROWS_WITH_AS(load_ldr(dir / "junk.png"), doctest::Contains("decode-failure"), Error);
  CHECK_THROWS_WITH_AS(save_ldr(LdrImage(1, 1), dir / "no/such/dir/x.png"), doctest::Contains("io-failure"), Error);

  // 1x1 16-bit RGB PNG (color type 2, bit depth 16).
  static const unsigned char png16[] = {
      0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52,
      0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x10, 0x02, 0x00, 0x00, 0x00, 0xc0, 0xe7, 0x8f,
      0x9d, 0x00, 0x00, 0x00, 0x0b, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x00, 0x03, 0x00,
      0x00, 0x07, 0x00, 0x01, 0xb2, 0x86, 0xac, 0xf4, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44,
      0xae, 0x42, 0x60, 0x82};
  {
    std::ofstream out(dir / "deep.png", std::ios::binary);
    out.write(reinterpret_cast<const char*>(png16), sizeof png16);
  }
  CHECK_THROWS_WITH_AS(load_ldr(dir / "deep.png"), doctest::Contains("unsupported-bit-depth"), Error);
}

TEST_CASE("PFM round trip is bit exact") {
  TempDir dir("pfm");
  HdrImage img(5, 3, 1.0f);
  CHECK_NOTHROW(save_hdr(img, dir / "u.pfm", HdrFormat::pfm));
  CHECK(load_hdr(dir / "u.pfm") == img);

  for (std::size_t i = 0; i < img.data().size(); ++i) img[i] = std::ldexp(1.0f + i * 0.001f, int(i % 40) - 20);
  save_hdr(img, dir / "v.pfm", HdrFormat::pfm);
  CHECK(load_hdr(dir / "v.pfm") == img);

  // Header, little-endian scale, bottom-to-top rows.
  const auto bytes = read_bytes(dir / "v.pfm");
  const std::string head(bytes.begin(), bytes.begin() + 12);
  CHECK(head == "PF\n5 3\n-1.0\n");
  float first = 0;
  std::memcpy(&first, bytes.data() + 12, 4);
  CHECK(first == img.pixel(0, 2)[0]);
}

TEST_CASE("HDR writers reject non-finite values") {
  TempDir dir("nan");
  HdrImage img(2, 2, 0.5f);
  img[4] = NAN;
  CHECK_THROWS_WITH_AS(save_hdr(img, dir / "n.pfm", HdrFormat::pfm), doctest::Contains("non-finite"), Error);
  CHECK_THROWS_WITH_AS(save_hdr(img, dir / "n.hdr", HdrFormat::rgbe), doctest::Contains("non-finite"), Error);
}

TEST_CASE("RGBE shared exponent") {
  // 0.5 = 128 * 2^-8 with exponent byte 128: mantissas 128, 64, 32.
  const auto e = rgbe_encode(0.5f, 0.25f, 0.125f);
  CHECK(int(e[0]) == 128);
  CHECK(int(e[1]) == 64);
  CHECK(int(e[2]) == 32);
  CHECK(int(e[3]) == 128);
  const auto d = rgbe_decode(e);
  CHECK(d[0] == 0.5f);
  CHECK(d[1] == 0.25f);
  CHECK(d[2] == 0.125f);
  const auto zero = rgbe_encode(0.0f, 0.0f, 0.0f);
  CHECK(zero == std::array<std::uint8_t, 4>{0, 0, 0, 0});
}

TEST_CASE("RGBE file round trip within quantization") {
  TempDir dir("rgbe");
  HdrImage img(64, 9);
  for (std::size_t i = 0; i < img.data().size(); ++i) img[i] = float(std::exp(std::sin(i * 0.37) * 6.0));
  save_hdr(img, dir / "x.hdr", HdrFormat::rgbe);
  const HdrImage back = load_hdr(dir / "x.hdr");
  REQUIRE(back.same_size(img));
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    const float peak = std::max({img[3 * p], img[3 * p + 1], img[3 * p + 2]});
    for (int c = 0; c < 3; ++c) CHECK(std::abs(back[3 * p + c] - img[3 * p + c]) <= peak / 256.0f);
  }
  const HdrImage unit(3, 3, 1.0f);
  save_hdr(unit, dir / "u.hdr", HdrFormat::rgbe);
  CHECK(load_hdr(dir / "u.hdr") == unit);
}

TEST_CASE("RGBE reader accepts run-length scanlines") {
  TempDir dir("rle");
  // Width 8 (RLE requires 8..32767), one row, each component plane is one run.
  std::string f = "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y 1 +X 8\n";
  f += std::string{2, 2, 0, 8};
  for (unsigned char v : {128, 64, 32, 129}) {
    f.push_back(char(128 + 8));
    f.push_back(char(v));
  }
  {
    std::ofstream(dir / "r.hdr", std::ios::binary) << f;
  }
  const HdrImage img = load_hdr(dir / "r.hdr");
  REQUIRE(img.width() == 8);
  for (std::size_t p = 0; p < 8; ++p) {
    CHECK(img[3 * p] == 1.0f);
    CHECK(img[3 * p + 1] == 0.5f);
    CHECK(img[3 * p + 2] == 0.25f);
  }
}

TEST_CASE("quantize rounds half away from zero and clamps") {
  CHECK(quantize_u8(0.5) == 1);
  CHECK(quantize_u8(1.49) == 1);
  CHECK(quantize_u8(254.5) == 255);
  CHECK(quantize_u8(-3.0) == 0);
  CHECK(quantize_u8(1e9) == 255);
  CHECK(quantize_u8(NAN) == 0);
}
