// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

namespace hdrboost {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <class T>
T number(std::string_view v) {
  T out{};
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size()) throw std::invalid_argument("not a number");
  return out;
}

bool boolean(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("not a boolean");
}

std::vector<int> int_list(std::string_view v) {
  std::vector<int> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(number<int>(trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

using Setter = std::function<void(PipelineConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"iterations", [](auto& c, auto v) { c.iterations = number<int>(v); }},
      {"evs", [](auto& c, auto v) { c.evs = int_list(v); }},
      {"tau", [](auto& c, auto v) { c.tau = number<double>(v); }},
      {"prompt", [](auto& c, auto v) { c.prompt = std::string(v); }},
      {"negative_prompt", [](auto& c, auto v) { c.negative_prompt = std::string(v); }},
      {"seed", [](auto& c, auto v) { c.seed = number<std::uint64_t>(v); }},
      {"steps", [](auto& c, auto v) { c.steps = number<int>(v); }},
      {"guidance_scale", [](auto& c, auto v) { c.guidance_scale = number<double>(v); }},
      {"control_scale", [](auto& c, auto v) { c.control_scale = number<double>(v); }},
      {"sdedit.k0", [](auto& c, auto v) { c.sdedit.k0 = number<double>(v); }},
      {"sdedit.dk", [](auto& c, auto v) { c.sdedit.dk = number<double>(v); }},
      {"sdedit.floor", [](auto& c, auto v) { c.sdedit.floor = number<double>(v); }},
      {"comp.s0", [](auto& c, auto v) { c.comp.s0 = number<double>(v); }},
      {"comp.ds", [](auto& c, auto v) { c.comp.ds = number<double>(v); }},
      {"comp.cap", [](auto& c, auto v) { c.comp.cap = number<double>(v); }},
      {"inpaint_ev0", [](auto& c, auto v) { c.inpaint_ev0 = boolean(v); }},
      {"mask_mode",
       [](auto& c, auto v) {
         if (v == "shared") c.mask_mode = MaskMode::shared;
         else if (v == "per_ev") c.mask_mode = MaskMode::per_ev;
         else throw std::invalid_argument("expected shared or per_ev");
       }},
      {"jobs", [](auto& c, auto v) { c.jobs = number<int>(v); }},
  };
  return table;
}

}  // namespace

void parse_config(std::string_view text, PipelineConfig& out) {
  PipelineConfig cfg = out;  // out is untouched on error
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto where = "line " + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::invalid_argument, where + "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const auto it = setters().find(key);
    if (it == setters().end()) throw Error(Errc::invalid_argument, where + "unknown key '" + std::string(key) + "'");
    try {
      it->second(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw Error(Errc::invalid_argument, where + std::string(key) + ": " + e.what());
    }
  }
  cfg.validate();
  out = std::move(cfg);
}

void load_config(const std::filesystem::path& path, PipelineConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_missing, path.string());
  std::ostringstream text;
  text << in.rdbuf();
  parse_config(text.str(), cfg);
}

}  // namespace hdrboost
