#pragma once

// Greedy equal-weight sparsification. At each step the next centered matrix
// X_i = A_i - Id is the one minimising the exponential potential of the
// running sum; the step size delta_k follows either a constant (fixed-N) or
// decreasing (all-steps) schedule.

#include <cstddef>
#include <span>
#include <vector>

#include "psdsparse/instance.hpp"
#include "psdsparse/potential.hpp"

namespace psdsparse {

// Absolute log-potential difference below which two candidates tie.
inline constexpr double kTieTol = 1e-12;
inline constexpr double kBoundSlack = 1e-9;
inline constexpr double kLiveCheckTol = 1e-9;
inline constexpr std::size_t kAuditInterval = 64;

enum class ScheduleMode { FixedN, AllSteps };

class Schedule {
 public:
  static Schedule all_steps(double norm_bound, std::size_t d);
  static Schedule fixed_n(std::size_t n, double norm_bound, std::size_t d);

  ScheduleMode mode() const { return mode_; }
  std::size_t n() const { return n_; }
  double norm_bound() const { return m_; }
  double log2d() const { return l_; }
  // First step of the fine regime: floor(M L) + 1.
  std::size_t q() const { return q_; }

  // delta_k for step k >= 1. All-steps: 1/M before q, sqrt(L / (M k)) from q
  // on. Fixed-N: min(1/M, sqrt(L / (M N))) throughout.
  double delta(std::size_t k) const;

 private:
  Schedule(ScheduleMode mode, std::size_t n, double norm_bound, std::size_t d);

  ScheduleMode mode_;
  std::size_t n_ = 0;
  double m_ = 1.0;
  double l_ = 0.0;
  std::size_t q_ = 1;
};

// k <= M ln(2d).
bool is_coarse(std::size_t k, double norm_bound, std::size_t d);

double bound_all_steps(std::size_t k, double norm_bound, std::size_t d);
double bound_fixed_n(std::size_t n, double norm_bound, std::size_t d);

// ceil(9 M ln(2d) / eps^2), eps in (0, 1].
std::size_t required_n(double epsilon, double norm_bound, std::size_t d);

// max(4 ceil(M ln(2d)), 64).
std::size_t default_k_max(double norm_bound, std::size_t d);

// log Phi_delta(Y + X_i) for every i. The OpenMP version splits candidates
// across PSDSPARSE_THREADS threads; each entry is computed by the same code
// as in the serial reference, so the two agree bit for bit.
std::vector<double> score_candidates(const SymMatrix& y, double delta, const CenteredFamily& fam);
std::vector<double> score_candidates_serial(const SymMatrix& y, double delta, const CenteredFamily& fam);

struct Selection {
  std::size_t index = 0;  // 0-based
  double log_potential = 0.0;
};

// Smallest score, scanning in index order; a later candidate only wins if it
// is below the incumbent by more than kTieTol.
Selection pick_min(std::span<const double> scores);

Selection select_next(const SymMatrix& y, double delta, const CenteredFamily& fam);

struct StepRecord {
  std::size_t k = 0;
  double delta = 0.0;
  double log_potential = 0.0;       // log Phi_{delta_k}(Y_k)
  double log_potential_prev = 0.0;  // log Phi_{delta_k}(Y_{k-1})
  double error = 0.0;               // ||Y_k / k||
  double bound = 0.0;
  bool coarse = false;
};

struct GreedyTrace {
  ScheduleMode mode = ScheduleMode::AllSteps;
  double norm_bound = 1.0;
  double log2d = 0.0;
  std::size_t q = 1;
  std::vector<std::size_t> indices;  // 0-based
  SymMatrix running_sum;
  std::vector<StepRecord> steps;
  // Live checks: per-step potential growth, and for all-steps runs the
  // recursion c_k <= a_k + alpha_k c_{k-1} with c_k <= 2L once k >= q.
  std::size_t potential_violations = 0;
  std::size_t recursion_violations = 0;
  double max_ratio = 0.0;
};

enum class Scoring { Parallel, Serial };

// Throws BoundViolation if some prefix exceeds its bound by more than 1e-9
// relative. For fixed-N runs k_max must equal N; earlier prefixes carry the
// bound (L + k M psi_M(delta)) / (delta k) from the same potential argument.
GreedyTrace run(const Instance& inst, const Schedule& schedule, std::size_t k_max,
                Scoring scoring = Scoring::Parallel);

}  // namespace psdsparse
