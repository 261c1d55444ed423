#include "psdsparse/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace psdsparse {

namespace {
constexpr double kSeriesCutoff = 1e-4;
constexpr double kMaxExponent = 700.0;
}  // namespace

PsiValue psi(double m1, double delta) {
  if (!(m1 > 0.0) || !std::isfinite(m1)) {
    throw Error(ErrorKind::DomainError, "psi needs m1 > 0, got " + std::to_string(m1));
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::DomainError, "psi needs delta >= 0, got " + std::to_string(delta));
  }
  const double u = delta * m1;
  if (u > kMaxExponent) {
    throw Error(ErrorKind::Overflow, "psi with delta*m1 = " + std::to_string(u));
  }
  double value;
  if (u < kSeriesCutoff) {
    // delta^2 (1/2 + u/6 + u^2/24); the next term is below 1e-17 relative.
    value = delta * delta * (0.5 + u * (1.0 / 6.0 + u / 24.0));
  } else {
    value = (std::expm1(u) - u) / (m1 * m1);
  }
  return {m1, delta, value};
}

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double top = sorted.back();
  if (top == -std::numeric_limits<double>::infinity()) return top;
  double rest = 0.0;
  for (std::size_t j = 0; j + 1 < sorted.size(); ++j) rest += std::exp(sorted[j] - top);
  return top + std::log1p(rest);
}

double log_potential_from_eigenvalues(const Eigen::VectorXd& eigenvalues, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::DomainError, "log_potential needs delta > 0, got " + std::to_string(delta));
  }
  std::vector<double> exponents;
  exponents.reserve(2 * static_cast<std::size_t>(eigenvalues.size()));
  for (double mu : eigenvalues) {
    exponents.push_back(delta * mu);
    exponents.push_back(-delta * mu);
  }
  return log_sum_exp(exponents);
}

LogPotential log_potential(const SymMatrix& y, double delta) {
  return {delta, log_potential_from_eigenvalues(eigvalsh(y), delta)};
}

double scalar_exp_bound_gap(double x, double delta, double m1) {
  if (x > m1) {
    throw Error(ErrorKind::DomainError, "scalar bound needs x <= m1");
  }
  if (!(delta > 0.0)) throw Error(ErrorKind::DomainError, "scalar bound needs delta > 0");
  const double p = psi(m1, delta).value;
  // Written as (delta x + p x^2) - expm1(delta x) to avoid losing the leading 1.
  return (delta * x + p * x * x) - std::expm1(delta * x);
}

}  // namespace psdsparse
