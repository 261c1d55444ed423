#include "psdsparse/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace psdsparse {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::WeightsNotSimplex: return "WeightsNotSimplex";
    case ErrorKind::NotIsotropic: return "NotIsotropic";
    case ErrorKind::NormBoundTooSmall: return "NormBoundTooSmall";
    case ErrorKind::CenteringCertificateFailed: return "CenteringCertificateFailed";
    case ErrorKind::IsotropicTransformFailed: return "IsotropicTransformFailed";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::EmptyFamily: return "EmptyFamily";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::NumericalDrift: return "NumericalDrift";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

SymMatrix::SymMatrix(Eigen::MatrixXd m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw Error(ErrorKind::NonFinite, "matrix has NaN or Inf entries");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::zero(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return SymMatrix(Eigen::MatrixXd::Zero(n, n));
}

SymMatrix SymMatrix::identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return SymMatrix(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& diag) {
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(diag.data(), static_cast<Eigen::Index>(diag.size()));
  return SymMatrix(Eigen::MatrixXd(v.asDiagonal()));
}

SymMatrix SymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  Eigen::Index j = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorKind::DimensionMismatch, "ragged row in from_rows");
    }
    Eigen::Index l = 0;
    for (double x : row) m(j, l++) = x;
    ++j;
  }
  return SymMatrix(std::move(m));
}

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return SymMatrix(a.m_ + b.m_);
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return SymMatrix(a.m_ - b.m_);
}

SymMatrix operator-(const SymMatrix& a) { return SymMatrix(-a.m_); }

SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.m_); }

Spectrum eigh(const SymMatrix& s) {
  if (!s.mat().allFinite()) throw Error(ErrorKind::NonFinite, "eigh input");
  if (s.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s.mat(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "symmetric QR iteration, d=" + std::to_string(s.dim()));
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXd eigvalsh(const SymMatrix& s) {
  if (!s.mat().allFinite()) throw Error(ErrorKind::NonFinite, "eigvalsh input");
  if (s.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s.mat(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "symmetric QR iteration, d=" + std::to_string(s.dim()));
  }
  return solver.eigenvalues();
}

double op_norm(const SymMatrix& s) {
  if (s.dim() == 0) return 0.0;
  const Eigen::VectorXd mu = eigvalsh(s);
  return std::max(std::abs(mu[0]), std::abs(mu[mu.size() - 1]));
}

double lambda_min(const SymMatrix& s) { return eigvalsh(s)[0]; }

double lambda_max(const SymMatrix& s) {
  const Eigen::VectorXd mu = eigvalsh(s);
  return mu[mu.size() - 1];
}

bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  require_same_dim(a, b);
  if (!(tol >= 0.0)) throw Error(ErrorKind::DomainError, "negative Loewner tolerance");
  const Eigen::VectorXd mu = eigvalsh(b - a);
  const double norm = std::max(std::abs(mu[0]), std::abs(mu[mu.size() - 1]));
  return mu[0] >= -tol * (1.0 + norm);
}

double trace_product(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return a.mat().cwiseProduct(b.mat()).sum();
}

SymMatrix square(const SymMatrix& s) { return SymMatrix(s.mat() * s.mat()); }

}  // namespace psdsparse
