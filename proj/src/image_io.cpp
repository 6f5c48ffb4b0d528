// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace hdrboost {
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_file(const fs::path& path) {
  if (!fs::exists(path)) throw Error(Errc::file_missing, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_failure, "short write to " + path.string());
}

// RAII for png_image; png_image_free is safe to call on a finished image.
struct PngImage {
  png_image image{};
  PngImage() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

void begin_png_read(PngImage& png, std::span<const std::uint8_t> bytes) {
  if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size())) {
    throw Error(Errc::decode_failure, png.image.message);
  }
  if (png.image.format & PNG_FORMAT_FLAG_LINEAR) {
    throw Error(Errc::unsupported_bit_depth, "only 8-bit PNG files are supported");
  }
}

std::vector<std::uint8_t> encode_png_raw(const std::uint8_t* samples, std::size_t width, std::size_t height,
                                         png_uint_32 format) {
  PngImage png;
  png.image.width = static_cast<png_uint_32>(width);
  png.image.height = static_cast<png_uint_32>(height);
  png.image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, samples, 0, nullptr)) {
    throw Error(Errc::io_failure, png.image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png.image, out.data(), &size, 0, samples, 0, nullptr)) {
    throw Error(Errc::io_failure, png.image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

LdrImage decode_png(std::span<const std::uint8_t> bytes) {
  PngImage png;
  begin_png_read(png, bytes);
  png.image.format = PNG_FORMAT_RGBA;
  const std::size_t w = png.image.width, h = png.image.height;
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, rgba.data(), 0, nullptr)) {
    throw Error(Errc::decode_failure, png.image.message);
  }
  LdrImage img(w, h);
  auto dst = img.data();
  for (std::size_t i = 0; i < w * h; ++i) std::copy_n(rgba.data() + 4 * i, 3, dst.data() + 3 * i);
  return img;
}

std::vector<std::uint8_t> encode_png(const LdrImage& img) {
  if (img.empty()) throw Error(Errc::invalid_argument, "cannot encode an empty image");
  return encode_png_raw(img.data().data(), img.width(), img.height(), PNG_FORMAT_RGB);
}

std::vector<std::uint8_t> encode_png_gray(std::span<const std::uint8_t> samples, std::size_t width,
                                          std::size_t height) {
  if (samples.size() != width * height || samples.empty()) {
    throw Error(Errc::dimension_mismatch, "gray PNG buffer does not match dimensions");
  }
  return encode_png_raw(samples.data(), width, height, PNG_FORMAT_GRAY);
}

std::vector<std::uint8_t> decode_png_gray(std::span<const std::uint8_t> bytes, std::size_t& width,
                                          std::size_t& height) {
  PngImage png;
  begin_png_read(png, bytes);
  png.image.format = PNG_FORMAT_GRAY;
  width = png.image.width;
  height = png.image.height;
  std::vector<std::uint8_t> out(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, out.data(), 0, nullptr)) {
    throw Error(Errc::decode_failure, png.image.message);
  }
  return out;
}

LdrImage load_ldr(const fs::path& path) { return decode_png(read_file(path)); }

void save_ldr(const LdrImage& img, const fs::path& path) { write_file(path, encode_png(img)); }

HdrFormat hdr_format_for(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".pfm" ? HdrFormat::pfm : HdrFormat::rgbe;
}

// ---------------------------------------------------------------------------
// Radiance RGBE

std::array<std::uint8_t, 4> rgbe_encode(float r, float g, float b) noexcept {
  const double peak = std::max({r, g, b});
  if (peak < 1e-32) return {0, 0, 0, 0};
  int exponent = 0;
  std::frexp(peak, &exponent);
  double scale = std::ldexp(1.0, 8 - exponent);
  if (std::round(peak * scale) >= 256.0) {
    ++exponent;
    scale *= 0.5;
  }
  if (exponent + 128 > 255) return {255, 255, 255, 255};
  if (exponent + 128 < 1) return {0, 0, 0, 0};
  auto mantissa = [scale](float v) { return static_cast<std::uint8_t>(std::round(std::max(v, 0.0f) * scale)); };
  return {mantissa(r), mantissa(g), mantissa(b), static_cast<std::uint8_t>(exponent + 128)};
}

std::array<float, 3> rgbe_decode(std::array<std::uint8_t, 4> rgbe) noexcept {
  if (rgbe[3] == 0) return {0.0f, 0.0f, 0.0f};
  const double f = std::ldexp(1.0, static_cast<int>(rgbe[3]) - 136);
  return {static_cast<float>(rgbe[0] * f), static_cast<float>(rgbe[1] * f), static_cast<float>(rgbe[2] * f)};
}

namespace {

std::vector<std::uint8_t> encode_rgbe_file(const HdrImage& img) {
  std::ostringstream header;
  header << "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y " << img.height() << " +X " << img.width() << "\n";
  const std::string h = header.str();
  std::vector<std::uint8_t> out(h.begin(), h.end());
  out.reserve(out.size() + 4 * img.pixel_count());
  const float* p = img.data().data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i, p += 3) {
    const auto e = rgbe_encode(p[0], p[1], p[2]);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string line() {
    std::string s;
    while (pos_ < bytes_.size() && bytes_[pos_] != '\n') s.push_back(static_cast<char>(bytes_[pos_++]));
    if (pos_ >= bytes_.size()) throw Error(Errc::decode_failure, "truncated header");
    ++pos_;
    return s;
  }
  std::uint8_t byte() {
    if (pos_ >= bytes_.size()) throw Error(Errc::decode_failure, "truncated pixel data");
    return bytes_[pos_++];
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw Error(Errc::decode_failure, "truncated pixel data");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::uint8_t peek(std::size_t off) const { return bytes_[pos_ + off]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// Reads one scanline of `width` RGBE quads, flat or new-style RLE.
void read_rgbe_scanline(ByteReader& in, std::size_t width, std::uint8_t* quads) {
  const bool rle = width >= 8 && width < 32768 && in.remaining() >= 4 && in.peek(0) == 2 && in.peek(1) == 2 &&
                   (in.peek(2) & 0x80) == 0;
  if (!rle) {
    auto flat = in.take(4 * width);
    std::copy(flat.begin(), flat.end(), quads);
    return;
  }
  in.take(2);
  const std::size_t encoded_width = (static_cast<std::size_t>(in.byte()) << 8) | in.byte();
  if (encoded_width != width) throw Error(Errc::decode_failure, "RLE scanline width mismatch");
  for (int c = 0; c < 4; ++c) {
    std::size_t x = 0;
    while (x < width) {
      std::size_t count = in.byte();
      if (count > 128) {
        count -= 128;
        if (x + count > width) throw Error(Errc::decode_failure, "RLE run overflows scanline");
        const std::uint8_t v = in.byte();
        for (std::size_t k = 0; k < count; ++k) quads[4 * (x++) + c] = v;
      } else {
        if (count == 0 || x + count > width) throw Error(Errc::decode_failure, "bad RLE literal");
        for (std::size_t k = 0; k < count; ++k) quads[4 * (x++) + c] = in.byte();
      }
    }
  }
}

HdrImage decode_rgbe_file(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  const std::string magic = in.line();
  if (magic.rfind("#?", 0) != 0) throw Error(Errc::decode_failure, "missing Radiance signature");
  for (;;) {
    const std::string l = in.line();
    if (l.empty()) break;
    if (l.rfind("FORMAT=", 0) == 0 && l != "FORMAT=32-bit_rle_rgbe") {
      throw Error(Errc::decode_failure, "unsupported Radiance pixel format " + l);
    }
  }
  std::istringstream res(in.line());
  std::string ya, xa;
  std::size_t h = 0, w = 0;
  if (!(res >> ya >> h >> xa >> w) || ya != "-Y" || xa != "+X" || w == 0 || h == 0) {
    throw Error(Errc::decode_failure, "unsupported Radiance resolution line");
  }
  HdrImage img(w, h);
  std::vector<std::uint8_t> quads(4 * w);
  float* dst = img.data().data();
  for (std::size_t y = 0; y < h; ++y) {
    read_rgbe_scanline(in, w, quads.data());
    for (std::size_t x = 0; x < w; ++x, dst += 3) {
      const auto v = rgbe_decode({quads[4 * x], quads[4 * x + 1], quads[4 * x + 2], quads[4 * x + 3]});
      std::copy(v.begin(), v.end(), dst);
    }
  }
  return img;
}

// ---------------------------------------------------------------------------
// PFM

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap32(v);
  return v;
}

}  // namespace

void save_pfm(std::span<const float> samples, std::size_t width, std::size_t height, std::size_t channels,
              const fs::path& path) {
  if (channels != 1 && channels != 3) throw Error(Errc::invalid_argument, "PFM supports 1 or 3 channels");
  if (samples.size() != width * height * channels) throw Error(Errc::dimension_mismatch, "PFM buffer size");
  std::ostringstream header;
  header << (channels == 3 ? "PF" : "Pf") << "\n" << width << " " << height << "\n-1.0\n";
  const std::string h = header.str();
  std::vector<std::uint8_t> out(h.begin(), h.end());
  out.resize(h.size() + samples.size() * 4);
  std::uint8_t* dst = out.data() + h.size();
  const std::size_t row = width * channels;
  // PFM stores scanlines bottom to top.
  for (std::size_t y = 0; y < height; ++y) {
    const float* src = samples.data() + (height - 1 - y) * row;
    for (std::size_t i = 0; i < row; ++i, dst += 4) {
      const std::uint32_t bits = to_little(std::bit_cast<std::uint32_t>(src[i]));
      std::memcpy(dst, &bits, 4);
    }
  }
  write_file(path, out);
}

std::vector<float> load_pfm(const fs::path& path, std::size_t& width, std::size_t& height, std::size_t& channels) {
  const auto bytes = read_file(path);
  ByteReader in(bytes);
  const std::string magic = in.line();
  if (magic == "PF") {
    channels = 3;
  } else if (magic == "Pf") {
    channels = 1;
  } else {
    throw Error(Errc::decode_failure, "not a PFM file");
  }
  std::string dims = in.line();
  std::istringstream ds(dims);
  if (!(ds >> width >> height) || width == 0 || height == 0) throw Error(Errc::decode_failure, "bad PFM size");
  double scale = 0.0;
  if (!(std::istringstream(in.line()) >> scale) || scale == 0.0) {
    throw Error(Errc::decode_failure, "bad PFM scale");
  }
  const bool little = scale < 0.0;
  const std::size_t row = width * channels;
  auto raw = in.take(row * height * 4);
  std::vector<float> out(row * height);
  for (std::size_t y = 0; y < height; ++y) {
    float* dst = out.data() + (height - 1 - y) * row;
    for (std::size_t i = 0; i < row; ++i) {
      std::uint32_t bits;
      std::memcpy(&bits, raw.data() + 4 * (y * row + i), 4);
      if (little != (std::endian::native == std::endian::little)) bits = __builtin_bswap32(bits);
      dst[i] = std::bit_cast<float>(bits);
    }
  }
  return out;
}

void save_hdr(const HdrImage& img, const fs::path& path, HdrFormat format) {
  if (img.empty()) throw Error(Errc::invalid_argument, "cannot save an empty image");
  require_finite(img);
  if (format == HdrFormat::pfm) {
    save_pfm(img.data(), img.width(), img.height(), 3, path);
  } else {
    write_file(path, encode_rgbe_file(img));
  }
}

HdrImage load_hdr(const fs::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == 'F' || bytes[1] == 'f')) {
    std::size_t w = 0, h = 0, c = 0;
    auto samples = load_pfm(path, w, h, c);
    if (c == 1) {
      std::vector<float> rgb(3 * samples.size());
      for (std::size_t i = 0; i < samples.size(); ++i) std::fill_n(rgb.begin() + 3 * i, 3, samples[i]);
      samples = std::move(rgb);
    }
    HdrImage img(w, h, std::move(samples));
    for (float& v : img.data()) {
      if (!std::isfinite(v) || v < 0.0f) throw Error(Errc::decode_failure, "PFM holds negative or non-finite radiance");
    }
    return img;
  }
  return decode_rgbe_file(bytes);
}

void save_mask(const SoftMask& mask, const fs::path& path) { save_pfm(mask.data(), mask.width(), mask.height(), 1, path); }

SoftMask load_mask(const fs::path& path) {
  std::size_t w = 0, h = 0, c = 0;
  auto samples = load_pfm(path, w, h, c);
  if (c != 1) throw Error(Errc::decode_failure, "mask file must be single-channel PFM");
  for (float v : samples) {
    if (!(v >= 0.0f && v <= 1.0f)) throw Error(Errc::decode_failure, "mask value outside [0, 1]");
  }
  return SoftMask(w, h, std::move(samples));
}

void save_mask_png(const SoftMask& mask, const fs::path& path) {
  std::vector<std::uint8_t> gray(mask.pixel_count());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = quantize_u8(mask[i] * 255.0);
  write_file(path, encode_png_gray(gray, mask.width(), mask.height()));
}

void save_luma_png(const LumaImage& luma, const fs::path& path) {
  std::vector<std::uint8_t> gray(luma.pixel_count());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = quantize_u8(luma[i]);
  write_file(path, encode_png_gray(gray, luma.width(), luma.height()));
}

}  // namespace hdrboost
