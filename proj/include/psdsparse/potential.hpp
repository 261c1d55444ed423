#pragma once

// Symmetric exponential potential Phi_delta(Y) = tr e^{delta Y} + tr e^{-delta Y}
// and the Taylor remainder coefficient psi_M(delta). Potentials are carried as
// logarithms throughout; delta * ||Y|| routinely exceeds the range of exp().

#include <span>

#include "psdsparse/symmat.hpp"

namespace psdsparse {

struct LogPotential {
  double delta = 0.0;
  double value = 0.0;  // log Phi_delta(Y)
};

struct PsiValue {
  double m1 = 0.0;
  double delta = 0.0;
  double value = 0.0;
};

// psi_{m1}(delta) = (e^{delta m1} - 1 - delta m1) / m1^2.
// Uses a three-term series below delta * m1 < 1e-4. Throws Overflow above 700.
PsiValue psi(double m1, double delta);

// Numerically stable log(sum_j exp(x_j)). The terms are summed in sorted
// order, so the result depends only on the multiset of inputs.
double log_sum_exp(std::span<const double> x);

// log Phi_delta from a precomputed spectrum.
double log_potential_from_eigenvalues(const Eigen::VectorXd& eigenvalues, double delta);

LogPotential log_potential(const SymMatrix& y, double delta);

// (1 + delta x + psi_{m1}(delta) x^2) - e^{delta x}; nonnegative for x <= m1
// up to rounding on the order of 1e-12 * e^{delta m1}.
double scalar_exp_bound_gap(double x, double delta, double m1);

}  // namespace psdsparse
