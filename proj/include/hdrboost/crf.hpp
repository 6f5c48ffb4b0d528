// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hdrboost/preprocess.hpp"

namespace hdrboost {

using ResponseCurve = std::array<double, 256>;

/// Hat weighting min(z, 255 - z), scaled so the peak is 1.
double hat_weight(int z) noexcept;
const ResponseCurve& hat_weights() noexcept;

/// Tabulated inverse camera response: g(z) = log radiance x exposure that
/// produces intensity z, per channel, anchored so g(128) = 0.
class InverseCrf {
 public:
  static constexpr int kAnchor = 128;

  InverseCrf();
  /// Subtracts g(128) from each channel. Throws invalid-argument on
  /// non-finite entries.
  explicit InverseCrf(const std::array<ResponseCurve, 3>& curves);

  /// Analytic response of a display gamma: g(z) = ln((z/255)^(1/p)) - ln((128/255)^(1/p))
  /// with p = cfg.encode_exponent(). z = 0 uses the bin edge 0.5.
  static InverseCrf from_gamma(const GammaConfig& cfg = {});

  const ResponseCurve& curve(int channel) const { return curves_[channel]; }
  double g(int channel, int z) const { return curves_[channel][z]; }
  /// Running maximum of g; what forward lookups search.
  const ResponseCurve& envelope(int channel) const { return envelopes_[channel]; }
  bool monotone() const noexcept;

  /// Intensity whose envelope value is closest to log_exposure, ties going to
  /// the lower intensity. Clamps to 0 below g(0) and 255 above g(255).
  std::uint8_t forward(double log_exposure, int channel) const noexcept;

  friend bool operator==(const InverseCrf&, const InverseCrf&) = default;

 private:
  std::array<ResponseCurve, 3> curves_{};
  std::array<ResponseCurve, 3> envelopes_{};
};

struct CrfSolverConfig {
  double lambda = 50.0;
  std::size_t samples = 400;
  // Sample locations are drawn from pixels whose EV 0 value lies in this range.
  int min_value = 5;
  int max_value = 250;

  void validate() const;
};

struct ResponseSolution {
  ResponseCurve g{};
  std::vector<double> log_radiance;  // one per sample location
};

/// Weighted least squares for one channel.
///   minimize  sum_ij w(Z_ij) [g(Z_ij) - lnE_i - ln t_j]^2
///           + lambda sum_{z=1..254} [w(z) (g(z-1) - 2 g(z) + g(z+1))]^2
///   subject to g(128) = 0
/// `samples` is row-major, sample_count rows x log_times.size() columns.
ResponseSolution solve_response_curve(std::span<const std::uint8_t> samples, std::size_t sample_count,
                                      std::span<const double> log_times, double lambda);

/// Picks sample locations on a deterministic grid and solves each channel.
/// Throws underdetermined-system for a single exposure or too few usable
/// pixels, solver-failure when the normal equations are singular.
InverseCrf estimate_inverse_crf(const ExposureStack& stack, const CrfSolverConfig& cfg = {});

struct ChannelMonotonicity {
  bool monotone = true;
  std::vector<int> violations;    // z with g(z + 1) < g(z)
  double worst_inversion = 0.0;   // max g(z) - g(z + 1) over violations
};

struct MonotonicityReport {
  std::array<ChannelMonotonicity, 3> channels;
  bool monotone() const noexcept {
    return channels[0].monotone && channels[1].monotone && channels[2].monotone;
  }
};

MonotonicityReport check_monotonic(const InverseCrf& crf);

/// CSV with header "z,g_r,g_g,g_b" and 256 rows at full double precision.
void save_crf_csv(const InverseCrf& crf, const std::filesystem::path& path);
InverseCrf load_crf_csv(const std::filesystem::path& path);

}  // namespace hdrboost
