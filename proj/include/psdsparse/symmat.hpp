#pragma once

// Dense real symmetric matrices and the spectral machinery the rest of the
// library is built on. Everything here is a pure function of its inputs.

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "psdsparse/error.hpp"

namespace psdsparse {

inline constexpr double kReconstructionTol = 1e-10;
inline constexpr double kLoewnerTol = 1e-10;

class SymMatrix {
 public:
  SymMatrix() = default;

  // Symmetrises (R + R^T) / 2 and rejects non-finite entries.
  explicit SymMatrix(Eigen::MatrixXd m);

  static SymMatrix zero(std::size_t d);
  static SymMatrix identity(std::size_t d);
  static SymMatrix diagonal(const std::vector<double>& diag);
  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t j, std::size_t l) const {
    return m_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
  }
  const Eigen::MatrixXd& mat() const { return m_; }

  double trace() const { return m_.trace(); }
  double frobenius() const { return m_.norm(); }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a);
  friend SymMatrix operator*(double s, const SymMatrix& a);

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Eigen::MatrixXd m_;
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // nondecreasing
  Eigen::MatrixXd eigenvectors;  // orthonormal columns
};

Spectrum eigh(const SymMatrix& s);

// Eigenvalues only, nondecreasing. Cheaper than eigh when vectors are unused.
Eigen::VectorXd eigvalsh(const SymMatrix& s);

double op_norm(const SymMatrix& s);
double lambda_min(const SymMatrix& s);
double lambda_max(const SymMatrix& s);

// A <= B in the Loewner order: lambda_min(B - A) >= -tol * (1 + ||B - A||).
bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol = kLoewnerTol);

// Q diag(f(mu)) Q^T.
template <class F>
SymMatrix sym_apply(const SymMatrix& s, F&& f) {
  const Spectrum sp = eigh(s);
  Eigen::VectorXd fv(sp.eigenvalues.size());
  for (Eigen::Index j = 0; j < fv.size(); ++j) fv[j] = f(sp.eigenvalues[j]);
  return SymMatrix(sp.eigenvectors * fv.asDiagonal() * sp.eigenvectors.transpose());
}

// Product of two symmetric matrices is not symmetric in general; this is the
// trace of that product, tr(AB) = sum_jl a_jl b_jl.
double trace_product(const SymMatrix& a, const SymMatrix& b);

SymMatrix square(const SymMatrix& s);

void require_same_dim(const SymMatrix& a, const SymMatrix& b);

}  // namespace psdsparse
