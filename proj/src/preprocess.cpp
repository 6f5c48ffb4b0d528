// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hdrboost/image_io.hpp"
#include "hdrboost/kernels.hpp"
#include <json.hpp>

namespace hdrboost {
namespace fs = std::filesystem;

ExposureStack::ExposureStack(std::vector<std::pair<int, LdrImage>> frames) {
  if (frames.empty()) throw Error(Errc::invalid_argument, "exposure stack needs at least one frame");
  std::sort(frames.begin(), frames.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i > 0 && frames[i].first == frames[i - 1].first) {
      throw Error(Errc::invalid_argument, "duplicate EV " + std::to_string(frames[i].first));
    }
    if (!frames[i].second.same_size(frames[0].second) || frames[i].second.empty()) {
      throw Error(Errc::dimension_mismatch, "stack frames differ in size");
    }
  }
  frames_.reserve(frames.size());
  for (auto& [ev, img] : frames) frames_.push_back({ev, std::ldexp(1.0, ev), std::move(img)});
  if (find(0) == nullptr) throw Error(Errc::missing_ev0, "stack has no EV 0 frame");
}

std::vector<int> ExposureStack::evs() const {
  std::vector<int> out;
  for (const auto& f : frames_) out.push_back(f.ev);
  return out;
}

const ExposureFrame* ExposureStack::find(int ev) const noexcept {
  for (const auto& f : frames_) {
    if (f.ev == ev) return &f;
  }
  return nullptr;
}

const ExposureFrame& ExposureStack::at_ev(int ev) const {
  if (const ExposureFrame* f = find(ev)) return *f;
  throw Error(Errc::missing_ev, "stack has no EV " + std::to_string(ev) + " frame");
}

void ExposureStack::set_image(int ev, LdrImage image) {
  for (auto& f : frames_) {
    if (f.ev != ev) continue;
    require_same_size(f.image, image, "replacement frame differs in size");
    f.image = std::move(image);
    return;
  }
  throw Error(Errc::missing_ev, "stack has no EV " + std::to_string(ev) + " frame");
}

void GammaConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(Errc::invalid_argument, "gamma must be positive");
}

void MaskConfig::validate() const {
  if (!(tau >= 0.0 && tau < 255.0)) throw Error(Errc::invalid_argument, "tau must lie in [0, 255)");
}

ExposureStack ev_stack_from_hdr(const HdrImage& hdr, const std::vector<int>& evs, const GammaConfig& cfg) {
  cfg.validate();
  if (evs.empty()) throw Error(Errc::invalid_argument, "EV list is empty");
  for (float v : hdr.data()) {
    if (!(v >= 0.0f && v <= 1.0f + 1e-6f)) throw Error(Errc::hdr_not_normalized, "radiance outside [0, 1]");
  }
  const double p = cfg.encode_exponent();
  std::vector<std::pair<int, LdrImage>> frames;
  for (int ev : evs) {
    const double gain = std::ldexp(1.0, ev);
    LdrImage img(hdr.width(), hdr.height());
    auto src = hdr.data();
    auto dst = img.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
      const double x = std::clamp(src[i] * gain, 0.0, 1.0);
      dst[i] = quantize_u8(255.0 * std::pow(x, p));
    }
    frames.emplace_back(ev, std::move(img));
  }
  return ExposureStack(std::move(frames));
}

HdrImage normalize_hdr(const HdrImage& hdr) {
  require_finite(hdr);
  const float peak = hdr.empty() ? 0.0f : *std::max_element(hdr.data().begin(), hdr.data().end());
  if (!(peak > 0.0f)) throw Error(Errc::all_black_input, "cannot normalize an all-black radiance map");
  HdrImage out = hdr;
  for (float& v : out.data()) v = std::max(v, 0.0f) / peak;
  return out;
}

HdrImage linearize_ldr(const LdrImage& img, const GammaConfig& cfg) {
  cfg.validate();
  const double inv = 1.0 / cfg.encode_exponent();
  std::array<float, 256> lut{};
  for (int z = 0; z < 256; ++z) lut[z] = static_cast<float>(std::pow(z / 255.0, inv));
  HdrImage out(img.width(), img.height());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = lut[src[i]];
  return out;
}

SoftMask soft_saturation_mask(const LdrImage& img, const MaskConfig& cfg) {
  cfg.validate();
  SoftMask mask(img.width(), img.height());
  kernels::active().soft_mask_rgb8(img.data().data(), static_cast<float>(cfg.tau), mask.data().data(),
                                   img.pixel_count());
  return mask;
}

ExposureStack ingest_stack(const std::vector<std::pair<int, fs::path>>& paths) {
  std::vector<std::pair<int, LdrImage>> frames;
  frames.reserve(paths.size());
  for (const auto& [ev, path] : paths) frames.emplace_back(ev, load_ldr(path));
  return ExposureStack(std::move(frames));
}

StackManifest read_manifest(const fs::path& path) {
  if (!fs::exists(path)) throw Error(Errc::file_missing, path.string());
  std::ifstream in(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::decode_failure, "manifest " + path.string() + ": " + e.what());
  }
  const fs::path base = path.parent_path();
  StackManifest m;
  try {
    for (const auto& f : doc.at("frames")) {
      m.frames.emplace_back(f.at("ev").get<int>(), base / f.at("path").get<std::string>());
    }
    if (doc.contains("crf")) m.crf = base / doc["crf"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::decode_failure, "manifest " + path.string() + ": " + e.what());
  }
  return m;
}

void write_manifest(const StackManifest& manifest, const fs::path& path) {
  nlohmann::json doc;
  doc["frames"] = nlohmann::json::array();
  const fs::path base = path.parent_path();
  for (const auto& [ev, p] : manifest.frames) {
    doc["frames"].push_back({{"ev", ev}, {"path", fs::relative(p, base.empty() ? fs::path(".") : base).string()}});
  }
  if (!manifest.crf.empty()) doc["crf"] = fs::relative(manifest.crf, base.empty() ? fs::path(".") : base).string();
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

}  // namespace hdrboost
