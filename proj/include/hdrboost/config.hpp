// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string_view>

#include "hdrboost/pipeline.hpp"

namespace hdrboost {

/// Applies `key = value` lines onto `cfg`. Keys are the PipelineConfig
/// field names, with schedule fields written sdedit.k0, comp.s0 and so on;
/// evs is a comma list. `#` starts a comment and values may be
/// double-quoted. Unknown keys, malformed values and a config that fails
/// validation throw invalid-argument naming the line; cfg is left as it was.
void parse_config(std::string_view text, PipelineConfig& cfg);
void load_config(const std::filesystem::path& path, PipelineConfig& cfg);

}  // namespace hdrboost
