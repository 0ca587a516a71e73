#pragma once

#include <stdexcept>
#include <string>

namespace gqs {

/// Error categories. Values mirror the status codes of the C API, so the
/// wrapper can translate exceptions without a lookup table.
enum class Errc : int {
  ok = 0,
  invalid_argument = 1,
  dimension_mismatch = 2,
  singular_cayley = 3,
  factorization_failed = 4,
  invalid_state = 5,
  undefined_argument = 6,
  not_applicable = 7,
  degenerate_system = 8,
  ill_conditioned = 9,
  inconsistent_phases = 10,
  invalid_estimate = 11,
  incomplete_input = 12,
  insufficient_cutoff = 13,
  unreliable_phase = 14,
  log_branch_failure = 15,
  unsupported = 16,
  io_error = 17,
  parse_error = 18,
  internal = 19,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace gqs
