#pragma once

// Falsification harness: every inequality the sparsification argument rests
// on, evaluated numerically. A report's slack is RHS - LHS in the natural
// scale of the comparison (log scale for potentials, relative for traces and
// spectra), so negative slack below the suite tolerance is a counterexample.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "psdsparse/instance.hpp"
#include "psdsparse/symmat.hpp"

namespace psdsparse {

struct CheckReport {
  std::string suite;
  std::size_t trials = 0;
  double worst_slack = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
  // The worst trial and the derived seed its inputs were drawn from.
  std::size_t worst_trial = 0;
  std::uint64_t worst_seed = 0;
};

// Weighted average of Phi_delta(Y + X_i) against e^{m2 psi_{m1}(delta)} Phi_delta(Y).
CheckReport check_one_step(const CenteredFamily& fam, const SymMatrix& y, double delta);

// sum lambda_i e^{+-delta X_i} <= e^{m2 psi_{m1}(delta)} Id, both signs.
CheckReport check_mgf(const CenteredFamily& fam, double delta);

// tr e^{U+V} <= tr(e^U e^V).
CheckReport check_golden_thompson(const SymMatrix& u, const SymMatrix& v);

// log Phi_eta(Y) <= (1 - eta/delta) log(2d) + (eta/delta) log Phi_delta(Y), 0 <= eta <= delta.
CheckReport check_interpolation(const SymMatrix& y, double eta, double delta, std::size_t d);

// delta ||Y|| <= log Phi_delta(Y).
CheckReport check_lower_bound(const SymMatrix& y, double delta);

// Scalar Taylor bound over an (x, delta) grid for a single m1.
CheckReport check_scalar_grid(double m1, std::size_t nx = 64, std::size_t ndelta = 16);

// psi_M(delta) <= delta^2 for delta <= 1/M, psi >= delta^2 / 2, and monotone in delta.
CheckReport check_psi(double m_bound, double delta);

// Random centered family with no positivity assumption: random symmetric X_i
// minus their weighted mean; m1 and m2 come from the data.
CenteredFamily random_centered_family(std::size_t d, std::size_t m, std::uint64_t seed);

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"one-step", "mgf", "gt", "interp", "lower", "scalar", "psi"};
  return names;
}

// Runs `trials` independent random trials (d <= 16, M1 <= 8) and merges by
// minimum slack. Trials run in parallel; the merged report does not depend on
// the thread count.
CheckReport run_suite(const std::string& suite, std::size_t trials, std::uint64_t seed);

}  // namespace psdsparse
