#pragma once

#include "fock.hpp"

namespace gqs {

struct VerifyOptions {
  int n = 1;
  int cases = 50;
  int cutoff = 60;
  std::uint64_t seed = 7;
  double tol = 1e-5;
  bool check_cutoff = true;
};

struct VerifyRow {
  std::string state_desc;
  std::string evo_desc;
  Complex closed_form;
  Complex oracle;
  double abs_err = 0.0;
};

struct VerifyResult {
  std::vector<VerifyRow> rows;
  double max_err = 0.0;
  bool pass = false;
  std::string table() const;
};

/// Compare the closed-form trace against the truncated-Fock oracle on random
/// (state, single-leg evolution) pairs with parameters bounded so truncation
/// stays below the comparison tolerance.
VerifyResult verify_against_oracle(const VerifyOptions& opt);

}  // namespace gqs
