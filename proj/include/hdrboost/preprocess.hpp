// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "hdrboost/image.hpp"

namespace hdrboost {

struct ExposureFrame {
  int ev = 0;
  double time = 1.0;  // relative exposure, exactly 2^ev
  LdrImage image;
};

/// Frames sorted by strictly decreasing EV. EV 0 is always present and every
/// frame shares the same dimensions.
class ExposureStack {
 public:
  ExposureStack() = default;
  /// Sorts by EV and derives exposure times. Throws missing-ev0,
  /// dimension-mismatch, or invalid-argument (duplicate EVs, empty input).
  explicit ExposureStack(std::vector<std::pair<int, LdrImage>> frames);

  const std::vector<ExposureFrame>& frames() const noexcept { return frames_; }
  std::size_t size() const noexcept { return frames_.size(); }
  bool empty() const noexcept { return frames_.empty(); }
  std::size_t width() const noexcept { return frames_.empty() ? 0 : frames_.front().image.width(); }
  std::size_t height() const noexcept { return frames_.empty() ? 0 : frames_.front().image.height(); }

  std::vector<int> evs() const;
  const ExposureFrame* find(int ev) const noexcept;
  /// Throws missing-ev when absent.
  const ExposureFrame& at_ev(int ev) const;
  const LdrImage& ev0() const { return at_ev(0).image; }
  /// Frame with the shortest exposure.
  const ExposureFrame& least_exposed() const { return frames_.back(); }

  /// Replaces the image of an existing EV; dimensions must match.
  void set_image(int ev, LdrImage image);

 private:
  std::vector<ExposureFrame> frames_;
};

inline const std::vector<int> kDefaultEvs{0, -1, -2, -3};

struct GammaConfig {
  double gamma = 2.2;
  // false: X = (H 2^ev)^(1/gamma), the usual display encoding.
  // true: X = (H 2^ev)^gamma, the exponent exactly as written in the method description.
  bool literal_exponent = false;

  double encode_exponent() const { return literal_exponent ? gamma : 1.0 / gamma; }
  void validate() const;
};

struct MaskConfig {
  double tau = 245.0;
  void validate() const;
};

/// Bracket synthesis from a radiance map normalized to [0, 1]:
/// X_ev = round(255 * clamp(H * 2^ev, 0, 1)^p) per channel.
ExposureStack ev_stack_from_hdr(const HdrImage& hdr, const std::vector<int>& evs, const GammaConfig& cfg = {});

/// Divides by the largest sample so the maximum becomes 1.
HdrImage normalize_hdr(const HdrImage& hdr);

/// Undoes the display encoding of an 8-bit frame: H = (X / 255)^(1/p).
HdrImage linearize_ldr(const LdrImage& img, const GammaConfig& cfg = {});

/// m = max(0, max_c(X_c) - tau) / (255 - tau)
SoftMask soft_saturation_mask(const LdrImage& img, const MaskConfig& cfg = {});

/// Loads PNG frames. Throws dimension-mismatch or missing-ev0.
ExposureStack ingest_stack(const std::vector<std::pair<int, std::filesystem::path>>& paths);

struct StackManifest {
  std::vector<std::pair<int, std::filesystem::path>> frames;  // resolved against the manifest directory
  std::filesystem::path crf;                                  // optional precomputed inverse CRF (CSV)
};

/// JSON manifest: {"frames": [{"ev": 0, "path": "ev0.png"}, ...], "crf": "crf.csv"}
StackManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const StackManifest& manifest, const std::filesystem::path& path);

}  // namespace hdrboost
