// Copyright 2026 The hdrboost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hdrboost {

enum class Errc {
  file_missing,
  decode_failure,
  unsupported_bit_depth,
  io_failure,
  non_finite_values,
  dimension_mismatch,
  hdr_not_normalized,
  missing_ev0,
  missing_ev,
  invalid_argument,
  underdetermined_system,
  solver_failure,
  all_black_input,
  backend_unreachable,
  backend_timeout,
  protocol_error,
};

const char* to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hdrboost
