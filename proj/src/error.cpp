// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdrboost/error.hpp"

namespace hdrboost {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::file_missing: return "file-missing";
    case Errc::decode_failure: return "decode-failure";
    case Errc::unsupported_bit_depth: return "unsupported-bit-depth";
    case Errc::io_failure: return "io-failure";
    case Errc::non_finite_values: return "non-finite-values";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::hdr_not_normalized: return "hdr-not-normalized";
    case Errc::missing_ev0: return "missing-ev0";
    case Errc::missing_ev: return "missing-ev";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::underdetermined_system: return "underdetermined-system";
    case Errc::solver_failure: return "solver-failure";
    case Errc::all_black_input: return "all-black-input";
    case Errc::backend_unreachable: return "backend-unreachable";
    case Errc::backend_timeout: return "backend-timeout";
    case Errc::protocol_error: return "protocol-error";
  }
  return "unknown";
}

}  // namespace hdrboost
