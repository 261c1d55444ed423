#include "psdsparse/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psdsparse/greedy.hpp"
#include "psdsparse/parallel.hpp"
#include "psdsparse/potential.hpp"
#include "psdsparse/rng.hpp"

namespace psdsparse {

namespace {

constexpr double kLogTol = 1e-9;
constexpr double kRelTol = 1e-9;
constexpr double kScalarTol = 1e-12;
constexpr double kPsiTol = 1e-12;

CheckReport single(const std::string& suite, double slack, double tol) {
  CheckReport r;
  r.suite = suite;
  r.trials = 1;
  r.worst_slack = slack;
  r.tolerance = tol;
  r.pass = slack >= -tol;
  return r;
}

// m2 psi_{m1}(delta), with the m1 = 0 family (all X_i = 0) giving 0.
double growth_exponent(const CenteredFamily& fam, double delta) {
  if (fam.m2() == 0.0 || fam.m1() == 0.0) return 0.0;
  return fam.m2() * psi(fam.m1(), delta).value;
}

SymMatrix random_symmetric(std::size_t d, double norm, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) g(r, c) = rng.normal();
  SymMatrix s(g);
  const double current = op_norm(s);
  if (current == 0.0) return s;
  return (norm / current) * s;
}

// PSD-derived families on even trials, unconstrained centered ones on odd.
CenteredFamily trial_family(std::size_t trial, Rng& rng) {
  if (trial % 2 == 0) {
    const std::size_t d = 1 + rng.below(8);
    const std::size_t nb = 1 + rng.below(3);
    return center(gen_bases(d, nb, rng.next_u64()));
  }
  const std::size_t d = 1 + rng.below(16);
  const std::size_t m = 2 + rng.below(15);
  return random_centered_family(d, m, rng.next_u64());
}

}  // namespace

CheckReport check_one_step(const CenteredFamily& fam, const SymMatrix& y, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::DomainError, "delta must be > 0");
  require_same_dim(fam.centered().front(), y);
  const std::vector<double> scores = score_candidates(y, delta, fam);
  std::vector<double> terms;
  terms.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (fam.weights()[i] > 0.0) terms.push_back(std::log(fam.weights()[i]) + scores[i]);
  }
  const double lhs = log_sum_exp(terms);
  const double rhs = growth_exponent(fam, delta) + log_potential(y, delta).value;
  return single("one-step", rhs - lhs, kLogTol);
}

CheckReport check_mgf(const CenteredFamily& fam, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::DomainError, "delta must be > 0");
  const double a = growth_exponent(fam, delta);
  const auto n = static_cast<Eigen::Index>(fam.dim());
  double slack = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < fam.size(); ++i) {
      sum += fam.weights()[i] * sym_apply(fam.centered()[i], [&](double x) { return std::exp(sign * delta * x); }).mat();
    }
    // 1 - lambda_max(sum) / e^a, computed as 1 - exp(log lambda_max - a).
    const double top = lambda_max(SymMatrix(sum));
    slack = std::min(slack, -std::expm1(std::log(top) - a));
  }
  return single("mgf", slack, kRelTol);
}

CheckReport check_golden_thompson(const SymMatrix& u, const SymMatrix& v) {
  require_same_dim(u, v);
  const Eigen::VectorXd mu = eigvalsh(u + v);
  const double lhs = mu.array().exp().sum();
  const auto ex = [](double x) { return std::exp(x); };
  const double rhs = trace_product(sym_apply(u, ex), sym_apply(v, ex));
  return single("gt", (rhs - lhs) / rhs, kRelTol);
}

CheckReport check_interpolation(const SymMatrix& y, double eta, double delta, std::size_t d) {
  if (!(delta > 0.0) || !(eta >= 0.0) || eta > delta) {
    throw Error(ErrorKind::DomainError, "interpolation needs 0 <= eta <= delta, delta > 0");
  }
  if (d != y.dim()) throw Error(ErrorKind::DimensionMismatch, "d does not match Y");
  const double log2d = std::log(2.0 * static_cast<double>(d));
  const double t = eta / delta;
  // Phi_0 = 2d; the eta = 0 endpoint is exact.
  const double lhs = eta == 0.0 ? log2d : log_potential(y, eta).value;
  const double rhs = eta == 0.0 ? log2d : (1.0 - t) * log2d + t * log_potential(y, delta).value;
  return single("interp", rhs - lhs, kLogTol);
}

CheckReport check_lower_bound(const SymMatrix& y, double delta) {
  return single("lower", log_potential(y, delta).value - delta * op_norm(y), kLogTol);
}

CheckReport check_scalar_grid(double m1, std::size_t nx, std::size_t ndelta) {
  if (!(m1 > 0.0) || nx < 2 || ndelta < 1) throw Error(ErrorKind::DomainError, "scalar grid parameters");
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= ndelta; ++j) {
    const double delta = 5.0 / m1 * static_cast<double>(j) / static_cast<double>(ndelta);
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = i + 1 == nx ? m1 : -50.0 * m1 + 51.0 * m1 * static_cast<double>(i) / static_cast<double>(nx - 1);
      worst = std::min(worst, scalar_exp_bound_gap(x, delta, m1) / std::exp(delta * m1));
    }
  }
  return single("scalar", worst, kScalarTol);
}

CheckReport check_psi(double m_bound, double delta) {
  const double p = psi(m_bound, delta).value;
  const double sq = delta * delta;
  if (sq == 0.0) return single("psi", p == 0.0 ? 0.0 : -std::abs(p), kPsiTol);
  double slack = (p - 0.5 * sq) / sq;
  if (delta <= 1.0 / m_bound) slack = std::min(slack, (sq - p) / sq);
  const double next = psi(m_bound, delta * (1.0 + 1e-3)).value;
  slack = std::min(slack, (next - p) / next);
  return single("psi", slack, kPsiTol);
}

CenteredFamily random_centered_family(std::size_t d, std::size_t m, std::uint64_t seed) {
  if (d < 1 || m < 1) throw Error(ErrorKind::DomainError, "random family needs d, m >= 1");
  Rng rng(seed);
  std::vector<double> weights(m);
  double total = 0.0;
  for (double& w : weights) total += (w = rng.uniform(0.1, 1.0));
  for (double& w : weights) w /= total;

  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Eigen::MatrixXd> raw;
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    raw.push_back(random_symmetric(d, rng.uniform(0.2, 1.0), rng).mat());
    mean += weights[i] * raw.back();
  }
  std::vector<SymMatrix> xs;
  double m1 = 0.0;
  for (auto& x : raw) {
    xs.emplace_back(x - mean);
    m1 = std::max(m1, op_norm(xs.back()));
  }
  const double target = rng.uniform(0.5, 8.0);
  if (m1 > 0.0) {
    for (auto& x : xs) x = (target / m1) * x;
  }
  return CenteredFamily::from_centered(std::move(weights), std::move(xs));
}

CheckReport run_suite(const std::string& suite, std::size_t trials, std::uint64_t seed) {
  double tol = kLogTol;
  if (suite == "mgf" || suite == "gt") tol = kRelTol;
  else if (suite == "scalar") tol = kScalarTol;
  else if (suite == "psi") tol = kPsiTol;
  else if (suite != "one-step" && suite != "interp" && suite != "lower") {
    throw Error(ErrorKind::DomainError, "unknown suite " + suite);
  }
  if (trials < 1) throw Error(ErrorKind::DomainError, "trials must be >= 1");

  const auto results = parallel_map<CheckReport>(trials, [&](std::size_t t) {
    const std::uint64_t trial_seed = Rng::derive(seed, t);
    Rng rng(trial_seed);
    CheckReport r;
    if (suite == "one-step") {
      const CenteredFamily fam = trial_family(t, rng);
      const SymMatrix y = random_symmetric(fam.dim(), rng.uniform(0.0, 20.0), rng);
      const double m1 = std::max(fam.m1(), 1e-3);
      r = check_one_step(fam, y, rng.uniform(1e-6, 3.0) / m1);
    } else if (suite == "mgf") {
      const CenteredFamily fam = trial_family(t, rng);
      const double m1 = std::max(fam.m1(), 1e-3);
      r = check_mgf(fam, rng.uniform(1e-6, 2.0) / m1);
    } else if (suite == "gt") {
      const std::size_t d = 1 + rng.below(16);
      const SymMatrix u = random_symmetric(d, rng.uniform(0.0, 2.0), rng);
      const SymMatrix v = random_symmetric(d, rng.uniform(0.0, 2.0), rng);
      r = check_golden_thompson(u, v);
    } else if (suite == "interp") {
      const std::size_t d = 1 + rng.below(16);
      const SymMatrix y = random_symmetric(d, rng.uniform(0.0, 20.0), rng);
      const double delta = rng.uniform(1e-3, 2.0);
      double eta = delta * rng.uniform();
      if (t % 10 == 3) eta = 0.0;
      if (t % 10 == 7) eta = delta;
      r = check_interpolation(y, eta, delta, d);
    } else if (suite == "lower") {
      const std::size_t d = 1 + rng.below(16);
      const SymMatrix y = random_symmetric(d, rng.uniform(0.0, 20.0), rng);
      r = check_lower_bound(y, rng.uniform(1e-6, 2.0));
    } else if (suite == "scalar") {
      r = check_scalar_grid(rng.uniform(0.1, 8.0));
    } else {
      const double m_bound = rng.uniform(1.0, 8.0);
      const double reach = t % 2 == 0 ? 1.0 : 5.0;
      r = check_psi(m_bound, reach / m_bound * rng.uniform());
    }
    r.worst_seed = trial_seed;
    r.worst_trial = t;
    return r;
  });

  CheckReport merged;
  merged.suite = suite;
  merged.trials = trials;
  merged.tolerance = tol;
  merged.seed = seed;
  merged.worst_slack = std::numeric_limits<double>::infinity();
  for (const CheckReport& r : results) {
    if (r.worst_slack < merged.worst_slack) {
      merged.worst_slack = r.worst_slack;
      merged.worst_seed = r.worst_seed;
      merged.worst_trial = r.worst_trial;
    }
  }
  merged.pass = merged.worst_slack >= -tol;
  return merged;
}

}  // namespace psdsparse
