#pragma once

#include <cstdint>

#include "psdsparse/rng.hpp"
#include "psdsparse/symmat.hpp"

namespace psdsparse::testing {

inline SymMatrix random_sym(std::size_t d, double scale, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i) g(i) = scale * rng.normal();
  return SymMatrix(g);
}

inline SymMatrix random_psd(std::size_t d, double scale, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i) g(i) = scale * rng.normal();
  return SymMatrix(g * g.transpose());
}

inline SymMatrix canonical_a1() { return SymMatrix::diagonal({2.0, 0.0}); }
inline SymMatrix canonical_a2() { return SymMatrix::diagonal({0.0, 2.0}); }

}  // namespace psdsparse::testing
