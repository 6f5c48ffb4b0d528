// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hdrboost/backend.hpp"
#include "hdrboost/compensate.hpp"
#include "hdrboost/crf.hpp"

namespace hdrboost {

inline constexpr const char* kDefaultPrompt =
    "A beautiful photo with bright background. High-resolution image with a lot of details and sharpness. "
    "4K, Ultra Quality. Good photo.";

struct SdeditSchedule {
  double k0 = 0.95;
  double dk = 0.05;
  double floor = 0.05;

  void validate() const;
};

/// max(k0 - dk (i - 1), floor) for i >= 1.
double sdedit_strength(const SdeditSchedule& schedule, int iteration);

enum class MaskMode {
  shared,  // one mask, shrunk with the largest residual over all EVs
  per_ev,  // each EV keeps and shrinks its own mask
};

struct PipelineConfig {
  int iterations = 4;
  std::vector<int> evs = kDefaultEvs;
  double tau = 245.0;
  std::string prompt = kDefaultPrompt;
  std::string negative_prompt;
  std::uint64_t seed = 0;
  int steps = 50;
  double guidance_scale = 5.0;
  double control_scale = 0.5;
  SdeditSchedule sdedit;
  CompensationSchedule comp;
  bool inpaint_ev0 = false;
  MaskMode mask_mode = MaskMode::shared;
  int jobs = 3;  // concurrent backend requests

  /// Throws invalid-argument.
  void validate() const;
};

struct ResolvedSchedules {
  std::vector<double> strengths;
  std::vector<double> scales;
};
ResolvedSchedules resolve_schedules(const PipelineConfig& cfg);

struct EvResidual {
  int ev = 0;
  float max_positive = 0.0f;  // over the support of the mask used this iteration
};

struct IterationRecord {
  int iteration = 0;
  double strength = 0.0;
  double scale = 0.0;
  std::vector<EvResidual> residuals;
  std::size_t masked_pixels = 0;  // after this iteration's shrink
  bool skipped = false;           // mask was already empty; no backend calls
  double inpaint_ms = 0.0;
  double total_ms = 0.0;

  float max_positive_residual() const noexcept;
};

struct PipelineReport {
  std::size_t initial_masked_pixels = 0;
  std::vector<IterationRecord> iterations;
  MonotonicityReport crf;
  double total_ms = 0.0;
};

/// JSON with snake_case keys; `config` is embedded when given.
std::string report_json(const PipelineReport& report, const PipelineConfig* config = nullptr);
std::string config_json(const PipelineConfig& config);

struct RunOptions {
  std::optional<std::filesystem::path> debug_dir;
  // Written after every iteration and on backend failure.
  std::optional<std::filesystem::path> checkpoint_dir;
  bool resume = false;
  std::optional<LumaImage> depth;
};

struct BoostResult {
  HdrImage hdr;
  ExposureStack stack;
  PipelineReport report;
};

/// The iterative inpaint / merge / align / compensate / shrink loop.
/// The returned HDR is the merge of the final compensated stack. Backend
/// errors propagate after the state at the start of the failing iteration
/// is checkpointed.
BoostResult run_boost(const ExposureStack& baseline, const InverseCrf& crf, const PipelineConfig& cfg,
                      InpaintBackend& backend, const RunOptions& options = {});

/// compute_residual on the frames at `ev`; throws missing-ev.
LumaImage residual_for_ev(const ExposureStack& baseline, const ExposureStack& aligned, int ev);

}  // namespace hdrboost
