// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <json.hpp>
#include <map>

#include "hdrboost/image_io.hpp"
#include "hdrboost/radiance.hpp"

namespace hdrboost {
namespace fs = std::filesystem;
using nlohmann::json;

void SdeditSchedule::validate() const {
  if (!(floor > 0.0 && floor <= k0 && k0 <= 1.0)) {
    throw Error(Errc::invalid_argument, "SDEdit schedule needs 0 < floor <= k0 <= 1");
  }
  if (!(dk >= 0.0)) throw Error(Errc::invalid_argument, "SDEdit decrement must be non-negative");
}

double sdedit_strength(const SdeditSchedule& schedule, int iteration) {
  if (iteration < 1) throw Error(Errc::invalid_argument, "iteration index starts at 1");
  return std::max(schedule.k0 - schedule.dk * (iteration - 1), schedule.floor);
}

void PipelineConfig::validate() const {
  if (iterations < 1) throw Error(Errc::invalid_argument, "iterations must be at least 1");
  if (!(tau >= 0.0 && tau < 255.0)) throw Error(Errc::invalid_argument, "tau must lie in [0, 255)");
  if (std::find(evs.begin(), evs.end(), 0) == evs.end()) throw Error(Errc::missing_ev0, "EV list lacks 0");
  std::vector<int> sorted = evs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(Errc::invalid_argument, "EV list has duplicates");
  }
  if (steps < 1) throw Error(Errc::invalid_argument, "steps must be at least 1");
  if (!(guidance_scale >= 0.0)) throw Error(Errc::invalid_argument, "guidance scale must be non-negative");
  if (!(control_scale >= 0.0 && control_scale <= 1.0)) {
    throw Error(Errc::invalid_argument, "control scale must lie in [0, 1]");
  }
  if (jobs < 1) throw Error(Errc::invalid_argument, "jobs must be at least 1");
  sdedit.validate();
  comp.validate();
}

ResolvedSchedules resolve_schedules(const PipelineConfig& cfg) {
  cfg.validate();
  ResolvedSchedules out;
  for (int i = 1; i <= cfg.iterations; ++i) {
    out.strengths.push_back(sdedit_strength(cfg.sdedit, i));
    out.scales.push_back(compensation_scale(cfg.comp, i));
  }
  return out;
}

float IterationRecord::max_positive_residual() const noexcept {
  float m = 0.0f;
  for (const auto& r : residuals) m = std::max(m, r.max_positive);
  return m;
}

LumaImage residual_for_ev(const ExposureStack& baseline, const ExposureStack& aligned, int ev) {
  return compute_residual(baseline.at_ev(ev).image, aligned.at_ev(ev).image);
}

// ---------------------------------------------------------------------------
// Report serialization

namespace {

json to_json(const PipelineConfig& c) {
  return {
      {"iterations", c.iterations},
      {"evs", c.evs},
      {"tau", c.tau},
      {"prompt", c.prompt},
      {"negative_prompt", c.negative_prompt},
      {"seed", c.seed},
      {"steps", c.steps},
      {"guidance_scale", c.guidance_scale},
      {"control_scale", c.control_scale},
      {"sdedit", {{"k0", c.sdedit.k0}, {"dk", c.sdedit.dk}, {"floor", c.sdedit.floor}}},
      {"comp", {{"s0", c.comp.s0}, {"ds", c.comp.ds}, {"cap", c.comp.cap}}},
      {"inpaint_ev0", c.inpaint_ev0},
      {"mask_mode", c.mask_mode == MaskMode::shared ? "shared" : "per_ev"},
      {"jobs", c.jobs},
  };
}

json to_json(const IterationRecord& r) {
  json res = json::array();
  for (const auto& e : r.residuals) res.push_back({{"ev", e.ev}, {"max_positive", e.max_positive}});
  return {{"iteration", r.iteration},     {"strength", r.strength},
          {"scale", r.scale},             {"max_positive_residual", res},
          {"masked_pixels", r.masked_pixels}, {"skipped", r.skipped},
          {"inpaint_ms", r.inpaint_ms},   {"total_ms", r.total_ms}};
}

IterationRecord record_from_json(const json& j) {
  IterationRecord r;
  r.iteration = j.at("iteration").get<int>();
  r.strength = j.at("strength").get<double>();
  r.scale = j.at("scale").get<double>();
  for (const auto& e : j.at("max_positive_residual")) {
    r.residuals.push_back({e.at("ev").get<int>(), e.at("max_positive").get<float>()});
  }
  r.masked_pixels = j.at("masked_pixels").get<std::size_t>();
  r.skipped = j.at("skipped").get<bool>();
  r.inpaint_ms = j.at("inpaint_ms").get<double>();
  r.total_ms = j.at("total_ms").get<double>();
  return r;
}

json to_json(const MonotonicityReport& m) {
  json ch = json::array();
  for (const auto& c : m.channels) {
    ch.push_back({{"monotone", c.monotone}, {"violations", c.violations}, {"worst_inversion", c.worst_inversion}});
  }
  return {{"monotone", m.monotone()}, {"channels", ch}};
}

}  // namespace

std::string config_json(const PipelineConfig& config) { return to_json(config).dump(2); }

std::string report_json(const PipelineReport& report, const PipelineConfig* config) {
  json j;
  j["initial_masked_pixels"] = report.initial_masked_pixels;
  j["iterations"] = json::array();
  for (const auto& r : report.iterations) j["iterations"].push_back(to_json(r));
  j["crf"] = to_json(report.crf);
  j["total_ms"] = report.total_ms;
  if (config) j["config"] = to_json(*config);
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Loop

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text << '\n';
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
}

// Signed residual as gray: 128 is zero, one level per two of residual.
void save_residual_png(const LumaImage& r, const fs::path& path) {
  LumaImage shown(r.width(), r.height());
  for (std::size_t i = 0; i < r.pixel_count(); ++i) shown[i] = 128.0f + 0.5f * r[i];
  save_luma_png(shown, path);
}

struct LoopState {
  ExposureStack stack;
  std::map<int, SoftMask> masks;  // key 0 holds the shared mask
  int next_iteration = 1;
  PipelineReport report;
};

const SoftMask& mask_for(const LoopState& s, MaskMode mode, int ev) {
  return s.masks.at(mode == MaskMode::shared ? 0 : ev);
}

std::size_t masked_pixels(const LoopState& s) {
  // Per-EV mode counts the union.
  const SoftMask& first = s.masks.begin()->second;
  std::size_t n = 0;
  for (std::size_t i = 0; i < first.pixel_count(); ++i) {
    for (const auto& [ev, m] : s.masks) {
      if (m[i] > 0.0f) {
        ++n;
        break;
      }
    }
  }
  return n;
}

std::string mask_file(int key) { return key == 0 ? "mask.pfm" : "mask_ev" + std::to_string(key) + ".pfm"; }

void save_checkpoint(const LoopState& s, const PipelineConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& f : s.stack.frames()) save_ldr(f.image, dir / ("ev" + std::to_string(f.ev) + ".png"));
  for (const auto& [key, m] : s.masks) save_mask(m, dir / mask_file(key));
  json j;
  j["next_iteration"] = s.next_iteration;
  j["evs"] = s.stack.evs();
  j["mask_keys"] = json::array();
  for (const auto& [key, m] : s.masks) j["mask_keys"].push_back(key);
  j["config"] = to_json(cfg);
  j["report"] = json::parse(report_json(s.report));
  write_text(dir / "state.json", j.dump(2));
}

LoopState load_checkpoint(const PipelineConfig& cfg, const fs::path& dir) {
  const fs::path state = dir / "state.json";
  if (!fs::exists(state)) throw Error(Errc::file_missing, "no checkpoint at " + state.string());
  std::ifstream in(state);
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::decode_failure, state.string() + " is not valid JSON");
  LoopState s;
  try {
    // Iteration count and parallelism may change between runs; nothing else.
    json saved = j.at("config"), now = to_json(cfg);
    for (const char* k : {"iterations", "jobs"}) {
      saved.erase(k);
      now.erase(k);
    }
    if (saved != now) {
      throw Error(Errc::invalid_argument, "checkpoint was written with a different configuration");
    }
    std::vector<std::pair<int, fs::path>> frames;
    for (int ev : j.at("evs").get<std::vector<int>>()) frames.emplace_back(ev, dir / ("ev" + std::to_string(ev) + ".png"));
    s.stack = ingest_stack(frames);
    for (int key : j.at("mask_keys").get<std::vector<int>>()) s.masks.emplace(key, load_mask(dir / mask_file(key)));
    s.next_iteration = j.at("next_iteration").get<int>();
    const json& rep = j.at("report");
    s.report.initial_masked_pixels = rep.at("initial_masked_pixels").get<std::size_t>();
    for (const auto& r : rep.at("iterations")) s.report.iterations.push_back(record_from_json(r));
  } catch (const json::exception& e) {
    throw Error(Errc::decode_failure, state.string() + ": " + e.what());
  }
  return s;
}

LoopState initial_state(const ExposureStack& baseline, const PipelineConfig& cfg) {
  LoopState s;
  s.stack = baseline;
  const SoftMask m0 = soft_saturation_mask(baseline.ev0(), MaskConfig{cfg.tau});
  if (cfg.mask_mode == MaskMode::shared) {
    s.masks.emplace(0, m0);
  } else {
    for (int ev : cfg.evs) s.masks.emplace(ev, m0);
  }
  s.report.initial_masked_pixels = support_size(m0);
  return s;
}

bool is_inpainted(const PipelineConfig& cfg, int ev) { return ev < 0 || (ev == 0 && cfg.inpaint_ev0); }

}  // namespace

BoostResult run_boost(const ExposureStack& baseline_in, const InverseCrf& crf, const PipelineConfig& cfg,
                      InpaintBackend& backend, const RunOptions& options) {
  cfg.validate();
  const auto run_start = Clock::now();

  std::vector<std::pair<int, LdrImage>> picked;
  for (int ev : cfg.evs) picked.emplace_back(ev, baseline_in.at_ev(ev).image);
  const ExposureStack baseline(std::move(picked));
  const std::vector<int> evs = baseline.evs();

  LoopState s = options.resume && options.checkpoint_dir ? load_checkpoint(cfg, *options.checkpoint_dir)
                                                         : initial_state(baseline, cfg);
  if (s.stack.evs() != evs || s.stack.width() != baseline.width() || s.stack.height() != baseline.height()) {
    throw Error(Errc::dimension_mismatch, "checkpoint differs from input");
  }

  // One depth map from the trusted EV 0 frame serves every EV and iteration.
  std::optional<LumaImage> depth = options.depth;
  if (!depth) {
    try {
      depth = backend.estimate_depth(baseline.ev0());
    } catch (const Error&) {
      if (options.checkpoint_dir) save_checkpoint(s, cfg, *options.checkpoint_dir);
      throw;
    }
  }
  if (depth) require_same_size(baseline.ev0(), *depth, "depth map differs from input");

  for (int i = s.next_iteration; i <= cfg.iterations; ++i) {
    const auto iter_start = Clock::now();
    IterationRecord rec;
    rec.iteration = i;
    rec.strength = sdedit_strength(cfg.sdedit, i);
    rec.scale = compensation_scale(cfg.comp, i);

    if (masked_pixels(s) == 0) {
      rec.skipped = true;
      rec.total_ms = ms_since(iter_start);
      s.report.iterations.push_back(rec);
      s.next_iteration = i + 1;
      continue;
    }

    std::optional<fs::path> dump;
    if (options.debug_dir) {
      dump = *options.debug_dir / ("iter_" + std::to_string(i));
      fs::create_directories(*dump);
    }

    // Inpaint, at most cfg.jobs requests in flight.
    std::vector<int> targets;
    for (int ev : evs) {
      if (is_inpainted(cfg, ev) && support_size(mask_for(s, cfg.mask_mode, ev)) > 0) targets.push_back(ev);
    }
    std::vector<std::pair<int, LdrImage>> inpainted;
    try {
      for (std::size_t lo = 0; lo < targets.size(); lo += static_cast<std::size_t>(cfg.jobs)) {
        const std::size_t hi = std::min(targets.size(), lo + static_cast<std::size_t>(cfg.jobs));
        std::vector<std::future<InpaintResponse>> pending;
        for (std::size_t k = lo; k < hi; ++k) {
          InpaintRequest req;
          req.image = s.stack.at_ev(targets[k]).image;
          req.mask = mask_for(s, cfg.mask_mode, targets[k]);
          req.depth = depth;
          req.prompt = cfg.prompt;
          req.negative_prompt = cfg.negative_prompt;
          req.strength = rec.strength;
          req.seed = cfg.seed;
          req.steps = cfg.steps;
          req.guidance_scale = cfg.guidance_scale;
          req.control_scale = cfg.control_scale;
          pending.push_back(std::async(std::launch::async, [&backend, r = std::move(req)] { return inpaint(r, backend); }));
        }
        // Drain every future before rethrowing so no request outlives the loop state.
        std::optional<Error> failure;
        for (std::size_t k = lo; k < hi; ++k) {
          try {
            inpainted.emplace_back(targets[k], pending[k - lo].get().image);
          } catch (const Error& e) {
            if (!failure) failure = e;
          }
        }
        if (failure) throw *failure;
      }
    } catch (const Error&) {
      if (options.checkpoint_dir) save_checkpoint(s, cfg, *options.checkpoint_dir);
      throw;
    }
    rec.inpaint_ms = ms_since(iter_start);

    ExposureStack current = s.stack;
    for (auto& [ev, img] : inpainted) {
      if (dump) save_ldr(img, *dump / ("ev" + std::to_string(ev) + "_inpaint.png"));
      current.set_image(ev, std::move(img));
    }

    const HdrImage merged = merge_hdr(current, crf);
    const ExposureStack aligned = reproject_stack(merged, crf, evs);

    std::map<int, LumaImage> residuals;
    for (int ev : evs) {
      LumaImage r = residual_for_ev(baseline, aligned, ev);
      rec.residuals.push_back({ev, max_positive_residual(r, mask_for(s, cfg.mask_mode, ev))});
      residuals.emplace(ev, std::move(r));
    }

    ExposureStack next = aligned;
    for (int ev : evs) {
      next.set_image(ev, apply_compensation(aligned.at_ev(ev).image, residuals.at(ev), mask_for(s, cfg.mask_mode, ev),
                                            rec.scale));
      if (dump) {
        save_ldr(aligned.at_ev(ev).image, *dump / ("aligned_ev" + std::to_string(ev) + ".png"));
        save_residual_png(residuals.at(ev), *dump / ("residual_ev" + std::to_string(ev) + ".png"));
      }
    }

    if (cfg.mask_mode == MaskMode::shared) {
      LumaImage worst = residuals.at(evs.front());
      for (int ev : evs) worst = pointwise_max(worst, residuals.at(ev));
      s.masks.at(0) = shrink_mask(s.masks.at(0), worst);
    } else {
      for (int ev : evs) s.masks.at(ev) = shrink_mask(s.masks.at(ev), residuals.at(ev));
    }
    s.stack = std::move(next);
    s.next_iteration = i + 1;
    rec.masked_pixels = masked_pixels(s);
    rec.total_ms = ms_since(iter_start);
    s.report.iterations.push_back(rec);

    if (dump) {
      const SoftMask& shown = s.masks.begin()->second;
      save_mask_png(shown, *dump / "mask.png");
    }
    if (options.checkpoint_dir) save_checkpoint(s, cfg, *options.checkpoint_dir);
  }

  BoostResult out;
  out.hdr = merge_hdr(s.stack, crf);
  out.stack = std::move(s.stack);
  out.report = std::move(s.report);
  out.report.crf = check_monotonic(crf);
  out.report.total_ms = ms_since(run_start);
  if (options.debug_dir) {
    fs::create_directories(*options.debug_dir);
    write_text(*options.debug_dir / "report.json", report_json(out.report, &cfg));
  }
  return out;
}

}  // namespace hdrboost
