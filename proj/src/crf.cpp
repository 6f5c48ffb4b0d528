// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/crf.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <string>

namespace hdrboost {
namespace fs = std::filesystem;

double hat_weight(int z) noexcept { return std::min(z, 255 - z) / 127.0; }

const ResponseCurve& hat_weights() noexcept {
  static const ResponseCurve w = [] {
    ResponseCurve t{};
    for (int z = 0; z < 256; ++z) t[z] = hat_weight(z);
    return t;
  }();
  return w;
}

// ---------------------------------------------------------------------------
// InverseCrf

InverseCrf::InverseCrf() : InverseCrf(from_gamma()) {}

InverseCrf::InverseCrf(const std::array<ResponseCurve, 3>& curves) : curves_(curves) {
  for (int c = 0; c < 3; ++c) {
    for (double v : curves_[c]) {
      if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "inverse CRF has non-finite entries");
    }
    const double anchor = curves_[c][kAnchor];
    for (double& v : curves_[c]) v -= anchor;
    double running = curves_[c][0];
    for (int z = 0; z < 256; ++z) {
      running = std::max(running, curves_[c][z]);
      envelopes_[c][z] = running;
    }
  }
}

InverseCrf InverseCrf::from_gamma(const GammaConfig& cfg) {
  cfg.validate();
  const double k = 1.0 / cfg.encode_exponent();
  ResponseCurve g{};
  for (int z = 0; z < 256; ++z) g[z] = k * std::log(z == 0 ? 0.5 / 255.0 : z / 255.0);
  return InverseCrf({g, g, g});
}

bool InverseCrf::monotone() const noexcept {
  for (const auto& g : curves_) {
    for (int z = 0; z < 255; ++z) {
      if (g[z + 1] < g[z]) return false;
    }
  }
  return true;
}

std::uint8_t InverseCrf::forward(double log_exposure, int channel) const noexcept {
  const ResponseCurve& env = envelopes_[channel];
  const auto it = std::upper_bound(env.begin(), env.end(), log_exposure);
  if (it == env.begin()) return 0;
  if (it == env.end()) return 255;
  const auto hi = static_cast<int>(it - env.begin());
  const int lo = hi - 1;
  return static_cast<std::uint8_t>(env[hi] - log_exposure < log_exposure - env[lo] ? hi : lo);
}

// ---------------------------------------------------------------------------
// Solver

void CrfSolverConfig::validate() const {
  if (!(lambda > 0.0)) throw Error(Errc::invalid_argument, "lambda must be positive");
  if (samples == 0) throw Error(Errc::invalid_argument, "sample count must be positive");
  if (min_value < 0 || max_value > 255 || min_value > max_value) {
    throw Error(Errc::invalid_argument, "sample value range must lie in [0, 255]");
  }
}

namespace {

std::size_t minimum_samples(std::size_t frames) { return 256 / (frames - 1) + 1; }

}  // namespace

ResponseSolution solve_response_curve(std::span<const std::uint8_t> samples, std::size_t sample_count,
                                      std::span<const double> log_times, double lambda) {
  const std::size_t frames = log_times.size();
  if (frames < 2) throw Error(Errc::underdetermined_system, "need at least two exposures");
  if (samples.size() != sample_count * frames) throw Error(Errc::dimension_mismatch, "sample matrix shape");
  if (sample_count < minimum_samples(frames)) {
    throw Error(Errc::underdetermined_system, std::to_string(sample_count) + " samples, need at least " +
                                                  std::to_string(minimum_samples(frames)));
  }

  // Normal equations assembled row by row; every equation touches at most
  // three unknowns. Unknowns: g(0..255) then lnE per sample.
  const auto n = static_cast<Eigen::Index>(256 + sample_count);
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const ResponseCurve& w = hat_weights();

  for (std::size_t i = 0; i < sample_count; ++i) {
    const Eigen::Index e = 256 + static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < frames; ++j) {
      const int z = samples[i * frames + j];
      const double wz = w[z];
      if (wz == 0.0) continue;
      // row: g(z) - lnE_i = ln t_j, weight wz
      normal(z, z) += wz;
      normal(e, e) += wz;
      normal(z, e) -= wz;
      normal(e, z) -= wz;
      rhs(z) += wz * log_times[j];
      rhs(e) -= wz * log_times[j];
    }
  }
  for (int z = 1; z < 255; ++z) {
    const double s = lambda * w[z] * w[z];
    const int idx[3] = {z - 1, z, z + 1};
    const double coef[3] = {1.0, -2.0, 1.0};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) normal(idx[a], idx[b]) += s * coef[a] * coef[b];
    }
  }
  // g(128) = 0: drop the unknown's column and pin its row.
  normal.row(InverseCrf::kAnchor).setZero();
  normal.col(InverseCrf::kAnchor).setZero();
  normal(InverseCrf::kAnchor, InverseCrf::kAnchor) = 1.0;
  rhs(InverseCrf::kAnchor) = 0.0;

  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) throw Error(Errc::solver_failure, "normal equations are not positive definite");
  const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
  if (diag.minCoeff() <= 1e-7 * diag.maxCoeff()) {
    throw Error(Errc::solver_failure, "normal equations are rank deficient");
  }
  const Eigen::VectorXd x = llt.solve(rhs);
  if (!x.allFinite()) throw Error(Errc::solver_failure, "solution is not finite");

  ResponseSolution out;
  for (int z = 0; z < 256; ++z) out.g[z] = x(z);
  out.log_radiance.assign(x.data() + 256, x.data() + n);
  return out;
}

InverseCrf estimate_inverse_crf(const ExposureStack& stack, const CrfSolverConfig& cfg) {
  cfg.validate();
  const std::size_t frames = stack.size();
  if (frames < 2) throw Error(Errc::underdetermined_system, "CRF estimation needs at least two exposures");

  std::vector<double> log_times;
  for (const auto& f : stack.frames()) log_times.push_back(std::log(f.time));

  const LdrImage& ev0 = stack.ev0();
  const std::size_t pixels = ev0.pixel_count();

  auto solve_channel = [&](int c) {
    std::vector<std::size_t> eligible;
    for (std::size_t p = 0; p < pixels; ++p) {
      const int v = ev0[3 * p + c];
      if (v >= cfg.min_value && v <= cfg.max_value) eligible.push_back(p);
    }
    // Evenly spaced picks along raster order: a regular grid over usable pixels.
    const std::size_t count = std::min(cfg.samples, eligible.size());
    std::vector<std::uint8_t> z(count * frames);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t p = eligible[k * eligible.size() / count];
      for (std::size_t j = 0; j < frames; ++j) z[k * frames + j] = stack.frames()[j].image[3 * p + c];
    }
    return solve_response_curve(z, count, log_times, cfg.lambda).g;
  };

  std::array<std::future<ResponseCurve>, 3> jobs;
  for (int c = 0; c < 3; ++c) jobs[c] = std::async(std::launch::async, solve_channel, c);
  std::array<ResponseCurve, 3> curves;
  for (int c = 0; c < 3; ++c) curves[c] = jobs[c].get();
  return InverseCrf(curves);
}

MonotonicityReport check_monotonic(const InverseCrf& crf) {
  MonotonicityReport report;
  for (int c = 0; c < 3; ++c) {
    auto& ch = report.channels[c];
    const auto& g = crf.curve(c);
    for (int z = 0; z < 255; ++z) {
      if (g[z + 1] < g[z]) {
        ch.monotone = false;
        ch.violations.push_back(z);
        ch.worst_inversion = std::max(ch.worst_inversion, g[z] - g[z + 1]);
      }
    }
  }
  return report;
}

void save_crf_csv(const InverseCrf& crf, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  out << "z,g_r,g_g,g_b\n";
  char buf[128];
  for (int z = 0; z < 256; ++z) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", z, crf.g(0, z), crf.g(1, z), crf.g(2, z));
    out << buf;
  }
  if (!out) throw Error(Errc::io_failure, "short write to " + path.string());
}

InverseCrf load_crf_csv(const fs::path& path) {
  if (!fs::exists(path)) throw Error(Errc::file_missing, path.string());
  std::ifstream in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("z,g_r,g_g,g_b", 0) != 0) {
    throw Error(Errc::decode_failure, path.string() + ": expected header z,g_r,g_g,g_b");
  }
  std::array<ResponseCurve, 3> curves{};
  std::array<bool, 256> seen{};
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    int z = -1;
    double r, g, b;
    if (!(fields >> z >> r >> g >> b) || z < 0 || z > 255 || seen[z]) {
      throw Error(Errc::decode_failure, path.string() + ": malformed row '" + line + "'");
    }
    seen[z] = true;
    curves[0][z] = r;
    curves[1][z] = g;
    curves[2][z] = b;
    ++rows;
  }
  if (rows != 256) throw Error(Errc::decode_failure, path.string() + ": expected 256 rows");
  try {
    return InverseCrf(curves);
  } catch (const Error& e) {
    throw Error(Errc::decode_failure, e.what());
  }
}

}  // namespace hdrboost
