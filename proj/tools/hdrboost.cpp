// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0
//
// hdrboost: boost over-exposed photographs into HDR radiance maps.
//
// Exit codes: 0 success, 1 non-monotone CRF (crf check), 2 configuration or
// input error, 3 backend error, 4 CRF estimation failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "hdrboost/config.hpp"
#include "hdrboost/image_io.hpp"
#include "hdrboost/radiance.hpp"
#include "hdrboost/tonemap.hpp"
#include "hdrboost/wire.hpp"

namespace fs = std::filesystem;
using namespace hdrboost;

namespace {

enum Exit : int { kOk = 0, kNonMonotone = 1, kConfig = 2, kBackend = 3, kCrf = 4 };

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::backend_unreachable:
    case Errc::backend_timeout:
    case Errc::protocol_error:
      return kBackend;
    case Errc::underdetermined_system:
    case Errc::solver_failure:
      return kCrf;
    default:
      return kConfig;
  }
}

std::vector<int> parse_evs(const std::string& text) {
  std::vector<int> evs;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      evs.push_back(std::stoi(item, &used));
      if (item.find_first_not_of(" ", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, "bad EV list '" + text + "'");
    }
  }
  return evs;
}

std::string join(const std::vector<double>& v) {
  std::string out = "[";
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.2f", i ? ", " : "", v[i]);
    out += buf;
  }
  return out + "]";
}

LumaImage load_depth(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::file_missing, path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), {}};
  return wire::decode_depth_png(bytes);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text << '\n';
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
}

// Manifest crf, then an explicit table, then estimation from the stack.
InverseCrf crf_for_stack(const ExposureStack& stack, const fs::path& manifest_crf, const std::string& flag_crf) {
  if (!flag_crf.empty()) return load_crf_csv(flag_crf);
  if (!manifest_crf.empty()) return load_crf_csv(manifest_crf);
  return estimate_inverse_crf(stack);
}

void print_monotonicity(const MonotonicityReport& report) {
  static const char* names[3] = {"r", "g", "b"};
  for (int c = 0; c < 3; ++c) {
    const auto& ch = report.channels[c];
    if (ch.monotone) {
      std::printf("%s: monotone\n", names[c]);
      continue;
    }
    std::printf("%s: %zu inversion(s), worst %.6g, at z =", names[c], ch.violations.size(), ch.worst_inversion);
    for (int z : ch.violations) std::printf(" %d", z);
    std::printf("\n");
  }
}

// ---------------------------------------------------------------------------

struct BoostArgs {
  std::string input, manifest, mode = "gamma", output_dir, backend = "identity", remote_url, prompt, negative_prompt;
  std::string tmo = "both", debug_dir, config, crf, depth, evs, mask_mode;
  int iterations = 4, steps = 50, jobs = 3;
  double tau = 245, gamma = 2.2, guidance = 5.0, control_scale = 0.5;
  double oracle_target = 180, oracle_amplitude = 0;
  std::uint64_t seed = 0;
  bool dry_run = false, resume = false, inpaint_ev0 = false, literal_gamma = false;
};

std::unique_ptr<InpaintBackend> make_backend(const BoostArgs& a, std::uint64_t seed) {
  switch (parse_backend_kind(a.backend)) {
    case BackendKind::identity:
      return std::make_unique<IdentityBackend>();
    case BackendKind::oracle_fill:
      return oracle_fill_configure(a.oracle_target, a.oracle_amplitude, seed);
    case BackendKind::remote: {
      RemoteConfig rc;
      if (!a.remote_url.empty()) {
        rc.url = a.remote_url;
      } else if (const char* env = std::getenv("HDRBOOST_REMOTE_URL"); env && *env) {
        rc.url = env;
      }
      return std::make_unique<RemoteBackend>(rc);
    }
  }
  return nullptr;
}

int cmd_boost(const BoostArgs& a, CLI::App& sub) {
  PipelineConfig cfg;
  if (!a.config.empty()) load_config(a.config, cfg);
  auto given = [&](const char* flag) { return sub.count(flag) > 0; };
  if (given("--iterations")) cfg.iterations = a.iterations;
  if (given("--tau")) cfg.tau = a.tau;
  if (given("--prompt")) cfg.prompt = a.prompt;
  if (given("--negative-prompt")) cfg.negative_prompt = a.negative_prompt;
  if (given("--seed")) cfg.seed = a.seed;
  if (given("--steps")) cfg.steps = a.steps;
  if (given("--guidance")) cfg.guidance_scale = a.guidance;
  if (given("--control-scale")) cfg.control_scale = a.control_scale;
  if (given("--jobs")) cfg.jobs = a.jobs;
  if (given("--evs")) cfg.evs = parse_evs(a.evs);
  if (given("--inpaint-ev0")) cfg.inpaint_ev0 = a.inpaint_ev0;
  if (given("--mask-mode")) cfg.mask_mode = a.mask_mode == "per_ev" ? MaskMode::per_ev : MaskMode::shared;
  cfg.validate();
  const GammaConfig gamma{a.gamma, a.literal_gamma};
  gamma.validate();
  parse_backend_kind(a.backend);
  const ToneMapper* only = nullptr;
  ToneMapper one{};
  if (a.tmo != "both" && a.tmo != "none") {
    one = parse_tone_mapper(a.tmo);
    only = &one;
  }

  if (a.dry_run) {
    const ResolvedSchedules s = resolve_schedules(cfg);
    std::printf("strengths: %s\nscales: %s\n", join(s.strengths).c_str(), join(s.scales).c_str());
    return kOk;
  }
  if (a.output_dir.empty()) throw Error(Errc::invalid_argument, "--output-dir is required");
  if (a.input.empty() == a.manifest.empty()) throw Error(Errc::invalid_argument, "give exactly one of --input, --manifest");

  // Baseline stack and its inverse response.
  ExposureStack baseline;
  InverseCrf crf;
  const bool from_manifest = !a.manifest.empty() || a.mode == "stack-manifest";
  if (from_manifest) {
    const StackManifest m = read_manifest(a.manifest.empty() ? a.input : a.manifest);
    baseline = ingest_stack(m.frames);
    crf = crf_for_stack(baseline, m.crf, a.crf);
  } else if (a.mode == "gamma") {
    const LdrImage ldr = load_ldr(a.input);
    baseline = ev_stack_from_hdr(linearize_ldr(ldr, gamma), cfg.evs, gamma);
    crf = a.crf.empty() ? InverseCrf::from_gamma(gamma) : load_crf_csv(a.crf);
  } else {
    throw Error(Errc::invalid_argument, "--mode must be gamma or stack-manifest");
  }

  const fs::path out_dir = a.output_dir;
  fs::create_directories(out_dir);
  RunOptions opts;
  if (!a.debug_dir.empty()) opts.debug_dir = fs::path(a.debug_dir);
  opts.checkpoint_dir = (a.debug_dir.empty() ? out_dir : fs::path(a.debug_dir)) / "checkpoint";
  opts.resume = a.resume;
  if (!a.depth.empty()) opts.depth = load_depth(a.depth);

  auto backend = make_backend(a, cfg.seed);
  const BoostResult r = run_boost(baseline, crf, cfg, *backend, opts);

  save_hdr(r.hdr, out_dir / "boost.hdr", HdrFormat::rgbe);
  save_hdr(r.hdr, out_dir / "boost.pfm", HdrFormat::pfm);
  for (const auto& f : r.stack.frames()) save_ldr(f.image, out_dir / ("final_ev" + std::to_string(f.ev) + ".png"));
  if (a.tmo != "none") {
    for (ToneMapper op : {ToneMapper::reinhard, ToneMapper::kimkautz}) {
      if (only && *only != op) continue;
      const char* name = op == ToneMapper::reinhard ? "reinhard" : "kimkautz";
      save_ldr(tonemap(r.hdr, op), out_dir / (std::string("boost_") + name + ".png"));
    }
  }
  write_text(out_dir / "report.json", report_json(r.report, &cfg));

  for (const auto& rec : r.report.iterations) {
    std::fprintf(stderr, "iter %d: strength %.2f scale %.2f max residual %.2f masked %zu%s\n", rec.iteration,
                 rec.strength, rec.scale, rec.max_positive_residual(), rec.masked_pixels,
                 rec.skipped ? " (skipped)" : "");
  }
  if (!r.report.crf.monotone()) std::fprintf(stderr, "warning: inverse CRF is not monotone\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boost over-exposed photographs into HDR radiance maps"};
  app.require_subcommand(1);

  BoostArgs b;
  CLI::App* boost = app.add_subcommand("boost", "Iteratively inpaint over-exposed regions and merge to HDR");
  boost->add_option("--input", b.input, "LDR PNG (gamma mode) or stack manifest (stack-manifest mode)");
  boost->add_option("--manifest", b.manifest, "Stack manifest JSON");
  boost->add_option("--mode", b.mode, "gamma | stack-manifest")->check(CLI::IsMember({"gamma", "stack-manifest"}));
  boost->add_option("--output-dir", b.output_dir);
  boost->add_option("--backend", b.backend, "identity | oracle | remote");
  boost->add_option("--remote-url", b.remote_url, "Defaults to $HDRBOOST_REMOTE_URL");
  boost->add_option("--iterations", b.iterations);
  boost->add_option("--evs", b.evs, "Comma list, must contain 0");
  boost->add_option("--tau", b.tau);
  boost->add_option("--gamma", b.gamma);
  boost->add_flag("--literal-gamma", b.literal_gamma, "Synthesize EVs with X = (H 2^ev)^gamma");
  boost->add_option("--prompt", b.prompt);
  boost->add_option("--negative-prompt", b.negative_prompt);
  boost->add_option("--seed", b.seed);
  boost->add_option("--steps", b.steps);
  boost->add_option("--guidance", b.guidance);
  boost->add_option("--control-scale", b.control_scale);
  boost->add_option("--tmo", b.tmo, "reinhard | kimkautz | both | none")
      ->check(CLI::IsMember({"reinhard", "kimkautz", "both", "none"}));
  boost->add_option("--debug-dir", b.debug_dir);
  boost->add_option("--jobs", b.jobs, "Concurrent backend requests");
  boost->add_flag("--dry-run", b.dry_run, "Validate and print the resolved schedules");
  boost->add_flag("--resume", b.resume, "Continue from the last checkpoint");
  boost->add_option("--config", b.config, "key = value file; flags override it");
  boost->add_option("--crf", b.crf, "Inverse CRF CSV");
  boost->add_option("--depth", b.depth, "Grayscale depth PNG, near bright");
  boost->add_option("--mask-mode", b.mask_mode)->check(CLI::IsMember({"shared", "per_ev"}));
  boost->add_flag("--inpaint-ev0", b.inpaint_ev0);
  boost->add_option("--oracle-target", b.oracle_target, "oracle backend fill luminance");
  boost->add_option("--oracle-amplitude", b.oracle_amplitude, "oracle backend texture amplitude");

  CLI::App* crf = app.add_subcommand("crf", "Inverse camera response tools");
  crf->require_subcommand(1);
  std::string crf_manifest, crf_out, crf_in;
  CrfSolverConfig solver;
  CLI::App* estimate = crf->add_subcommand("estimate", "Solve for g from a bracket");
  estimate->add_option("--manifest", crf_manifest)->required();
  estimate->add_option("--output", crf_out)->required();
  estimate->add_option("--lambda", solver.lambda);
  estimate->add_option("--samples", solver.samples);
  CLI::App* check = crf->add_subcommand("check", "Report monotonicity; exit 1 when violated");
  check->add_option("--crf", crf_in)->required();

  std::string merge_manifest, merge_crf, merge_out;
  CLI::App* merge = app.add_subcommand("merge", "Merge a bracket into radiance");
  merge->add_option("--manifest", merge_manifest)->required();
  merge->add_option("--crf", merge_crf);
  merge->add_option("--output", merge_out, ".hdr or .pfm")->required();

  std::string rp_hdr, rp_crf, rp_out, rp_evs = "0,-1,-2,-3";
  double rp_gamma = 2.2;
  CLI::App* reproject = app.add_subcommand("reproject", "Render bracket frames from radiance");
  reproject->add_option("--hdr", rp_hdr)->required();
  reproject->add_option("--crf", rp_crf, "Inverse CRF CSV; a gamma curve when absent");
  reproject->add_option("--gamma", rp_gamma);
  reproject->add_option("--evs", rp_evs);
  reproject->add_option("--output-dir", rp_out)->required();

  std::string tm_hdr, tm_out, tm_op = "reinhard";
  CLI::App* tmo = app.add_subcommand("tonemap", "Tone map radiance to an 8-bit PNG");
  tmo->add_option("--hdr", tm_hdr)->required();
  tmo->add_option("--tmo", tm_op)->check(CLI::IsMember({"reinhard", "kimkautz"}));
  tmo->add_option("--output", tm_out)->required();

  std::string mk_in, mk_out, mk_pfm;
  double mk_tau = 245;
  CLI::App* mask = app.add_subcommand("mask", "Soft saturation mask of an LDR image");
  mask->add_option("--input", mk_in)->required();
  mask->add_option("--tau", mk_tau);
  mask->add_option("--output", mk_out, "8-bit PNG")->required();
  mask->add_option("--pfm", mk_pfm, "Also write the float mask");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*boost) return cmd_boost(b, *boost);

    if (*estimate) {
      const StackManifest m = read_manifest(crf_manifest);
      const InverseCrf g = estimate_inverse_crf(ingest_stack(m.frames), solver);
      save_crf_csv(g, crf_out);
      print_monotonicity(check_monotonic(g));
      return kOk;
    }
    if (*check) {
      const MonotonicityReport report = check_monotonic(load_crf_csv(crf_in));
      print_monotonicity(report);
      return report.monotone() ? kOk : kNonMonotone;
    }
    if (*merge) {
      const StackManifest m = read_manifest(merge_manifest);
      const ExposureStack stack = ingest_stack(m.frames);
      const HdrImage hdr = merge_hdr(stack, crf_for_stack(stack, m.crf, merge_crf));
      save_hdr(hdr, merge_out, hdr_format_for(merge_out));
      return kOk;
    }
    if (*reproject) {
      const InverseCrf g = rp_crf.empty() ? InverseCrf::from_gamma(GammaConfig{rp_gamma}) : load_crf_csv(rp_crf);
      const ExposureStack stack = reproject_stack(load_hdr(rp_hdr), g, parse_evs(rp_evs));
      const fs::path dir = rp_out;
      fs::create_directories(dir);
      StackManifest m;
      for (const auto& f : stack.frames()) {
        const fs::path p = dir / ("ev" + std::to_string(f.ev) + ".png");
        save_ldr(f.image, p);
        m.frames.emplace_back(f.ev, p);
      }
      write_manifest(m, dir / "manifest.json");
      return kOk;
    }
    if (*tmo) {
      save_ldr(tonemap(load_hdr(tm_hdr), parse_tone_mapper(tm_op)), tm_out);
      return kOk;
    }
    if (*mask) {
      const SoftMask m = soft_saturation_mask(load_ldr(mk_in), MaskConfig{mk_tau});
      save_mask_png(m, mk_out);
      if (!mk_pfm.empty()) save_mask(m, mk_pfm);
      return kOk;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "hdrboost: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hdrboost: %s\n", e.what());
    return kConfig;
  }
  return kConfig;
}
