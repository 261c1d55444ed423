#include "psdsparse/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "psdsparse/parallel.hpp"

namespace psdsparse {

namespace {

void check_bound_args(std::size_t k, double norm_bound, std::size_t d) {
  if (k < 1) throw Error(ErrorKind::DomainError, "step count must be >= 1");
  if (!(norm_bound >= 1.0 - kSimplexTol) || !std::isfinite(norm_bound)) {
    throw Error(ErrorKind::DomainError, "norm bound must be >= 1");
  }
  if (d < 1) throw Error(ErrorKind::DomainError, "dimension must be >= 1");
}

double score_one(const SymMatrix& y, const SymMatrix& x, double delta) {
  return log_potential_from_eigenvalues(eigvalsh(y + x), delta);
}

}  // namespace

Schedule::Schedule(ScheduleMode mode, std::size_t n, double norm_bound, std::size_t d)
    : mode_(mode), n_(n), m_(norm_bound), l_(std::log(2.0 * static_cast<double>(d))) {
  q_ = static_cast<std::size_t>(std::floor(m_ * l_)) + 1;
}

Schedule Schedule::all_steps(double norm_bound, std::size_t d) {
  check_bound_args(1, norm_bound, d);
  return Schedule(ScheduleMode::AllSteps, 0, norm_bound, d);
}

Schedule Schedule::fixed_n(std::size_t n, double norm_bound, std::size_t d) {
  check_bound_args(n, norm_bound, d);
  return Schedule(ScheduleMode::FixedN, n, norm_bound, d);
}

double Schedule::delta(std::size_t k) const {
  if (k < 1) throw Error(ErrorKind::DomainError, "schedule step must be >= 1");
  if (mode_ == ScheduleMode::FixedN) {
    return std::min(1.0 / m_, std::sqrt(l_ / (m_ * static_cast<double>(n_))));
  }
  if (k < q_) return 1.0 / m_;
  return std::sqrt(l_ / (m_ * static_cast<double>(k)));
}

bool is_coarse(std::size_t k, double norm_bound, std::size_t d) {
  return static_cast<double>(k) <= norm_bound * std::log(2.0 * static_cast<double>(d));
}

double bound_all_steps(std::size_t k, double norm_bound, std::size_t d) {
  check_bound_args(k, norm_bound, d);
  const double ml = norm_bound * std::log(2.0 * static_cast<double>(d));
  const double kk = static_cast<double>(k);
  return kk <= ml ? 2.0 * ml / kk : 3.0 * std::sqrt(ml / kk);
}

double bound_fixed_n(std::size_t n, double norm_bound, std::size_t d) {
  check_bound_args(n, norm_bound, d);
  const double ml = norm_bound * std::log(2.0 * static_cast<double>(d));
  const double nn = static_cast<double>(n);
  return nn >= ml ? 2.0 * std::sqrt(ml / nn) : 2.0 * ml / nn;
}

std::size_t required_n(double epsilon, double norm_bound, std::size_t d) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorKind::DomainError, "epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  }
  check_bound_args(1, norm_bound, d);
  const double n = 9.0 * norm_bound * std::log(2.0 * static_cast<double>(d)) / (epsilon * epsilon);
  return static_cast<std::size_t>(std::ceil(n));
}

std::size_t default_k_max(double norm_bound, std::size_t d) {
  const double ml = norm_bound * std::log(2.0 * static_cast<double>(d));
  return std::max<std::size_t>(4 * static_cast<std::size_t>(std::ceil(ml)), 64);
}

std::vector<double> score_candidates_serial(const SymMatrix& y, double delta, const CenteredFamily& fam) {
  std::vector<double> scores(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) scores[i] = score_one(y, fam.centered()[i], delta);
  return scores;
}

std::vector<double> score_candidates(const SymMatrix& y, double delta, const CenteredFamily& fam) {
  return parallel_map<double>(fam.size(), [&](std::size_t i) { return score_one(y, fam.centered()[i], delta); });
}

Selection pick_min(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorKind::EmptyFamily, "no candidates to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] < scores[best] - kTieTol) best = i;
  }
  return {best, scores[best]};
}

Selection select_next(const SymMatrix& y, double delta, const CenteredFamily& fam) {
  if (fam.size() == 0) throw Error(ErrorKind::EmptyFamily, "no candidates to select from");
  if (!(delta > 0.0)) throw Error(ErrorKind::DomainError, "delta must be > 0");
  const std::vector<double> scores = score_candidates(y, delta, fam);
  return pick_min(scores);
}

GreedyTrace run(const Instance& inst, const Schedule& schedule, std::size_t k_max, Scoring scoring) {
  if (k_max < 1) throw Error(ErrorKind::DomainError, "k_max must be >= 1");
  if (schedule.mode() == ScheduleMode::FixedN && k_max != schedule.n()) {
    throw Error(ErrorKind::DomainError, "fixed-N run needs k_max == N");
  }
  const CenteredFamily fam = center(inst);
  const std::size_t d = inst.dim();
  const double big_m = inst.norm_bound();
  const double log2d = schedule.log2d();

  GreedyTrace trace;
  trace.mode = schedule.mode();
  trace.norm_bound = big_m;
  trace.log2d = log2d;
  trace.q = schedule.q();
  trace.indices.reserve(k_max);
  trace.steps.reserve(k_max);

  SymMatrix y = SymMatrix::zero(d);
  double prev_c = 0.0;
  double prev_delta = 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double delta = schedule.delta(k);
    const double a_k = big_m * psi(big_m, delta).value;

    StepRecord rec;
    rec.k = k;
    rec.delta = delta;
    rec.log_potential_prev = log_potential(y, delta).value;

    const std::vector<double> scores =
        scoring == Scoring::Parallel ? score_candidates(y, delta, fam) : score_candidates_serial(y, delta, fam);
    const Selection sel = pick_min(scores);
    trace.indices.push_back(sel.index);
    y = y + fam.centered()[sel.index];
    rec.log_potential = sel.log_potential;
    rec.error = op_norm(y) / static_cast<double>(k);
    rec.coarse = is_coarse(k, big_m, d);

    if (schedule.mode() == ScheduleMode::AllSteps) {
      rec.bound = bound_all_steps(k, big_m, d);
    } else if (k == schedule.n()) {
      rec.bound = bound_fixed_n(k, big_m, d);
    } else {
      rec.bound = (log2d + static_cast<double>(k) * a_k) / (delta * static_cast<double>(k));
    }

    if (!std::isfinite(rec.log_potential) || !std::isfinite(rec.error)) {
      throw Error(ErrorKind::NonFinite, "step " + std::to_string(k));
    }

    if (rec.log_potential > a_k + rec.log_potential_prev + kLiveCheckTol) ++trace.potential_violations;

    const double c_k = rec.log_potential - log2d;
    if (schedule.mode() == ScheduleMode::AllSteps && k >= schedule.q()) {
      bool ok = c_k <= 2.0 * log2d + kLiveCheckTol;
      if (k >= 2) {
        const double alpha = delta / prev_delta;
        ok = ok && c_k <= a_k + alpha * prev_c + kLiveCheckTol;
      }
      if (!ok) ++trace.recursion_violations;
    }
    prev_c = c_k;
    prev_delta = delta;

    if (k % kAuditInterval == 0 || k == k_max) {
      Eigen::MatrixXd fresh = Eigen::MatrixXd::Zero(y.mat().rows(), y.mat().cols());
      for (std::size_t idx : trace.indices) fresh += fam.centered()[idx].mat();
      const double drift = (fresh - y.mat()).norm();
      if (drift > 1e-9 * static_cast<double>(k)) {
        throw Error(ErrorKind::NumericalDrift, "running sum drifted by " + std::to_string(drift) + " at step " + std::to_string(k));
      }
    }

    trace.max_ratio = std::max(trace.max_ratio, rec.error / rec.bound);
    trace.steps.push_back(rec);
    if (rec.error > rec.bound * (1.0 + kBoundSlack)) {
      trace.running_sum = y;
      throw Error(ErrorKind::BoundViolation, "step " + std::to_string(k) + ": error " + std::to_string(rec.error) +
                                                 " > bound " + std::to_string(rec.bound));
    }
  }
  trace.running_sum = std::move(y);
  return trace;
}

}  // namespace psdsparse
