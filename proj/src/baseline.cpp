#include "psdsparse/baseline.hpp"

#include <algorithm>

#include "psdsparse/parallel.hpp"
#include "psdsparse/rng.hpp"

namespace psdsparse {

std::vector<std::size_t> sample_indices(const Instance& inst, std::size_t k_max, std::uint64_t seed) {
  if (k_max < 1) throw Error(ErrorKind::DomainError, "k_max must be >= 1");
  std::vector<double> cdf(inst.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) cdf[i] = (acc += inst.weights()[i]);
  const double total = acc;

  Rng rng(seed);
  std::vector<std::size_t> out;
  out.reserve(k_max);
  for (std::size_t k = 0; k < k_max; ++k) {
    const double u = rng.uniform() * total;
    // First i with cdf[i] > u; zero-weight items can never be hit.
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    out.push_back(static_cast<std::size_t>(it - cdf.begin()));
  }
  return out;
}

BaselineTrace sample_run(const Instance& inst, std::size_t k_max, std::uint64_t seed) {
  BaselineTrace trace;
  trace.seed = seed;
  trace.indices = sample_indices(inst, k_max, seed);
  trace.errors.reserve(k_max);
  const SymMatrix id = SymMatrix::identity(inst.dim());
  SymMatrix y = SymMatrix::zero(inst.dim());
  for (std::size_t k = 1; k <= k_max; ++k) {
    y = y + (inst.matrices()[trace.indices[k - 1]] - id);
    trace.errors.push_back(op_norm(y) / static_cast<double>(k));
  }
  return trace;
}

std::vector<BaselineTrace> sample_runs(const Instance& inst, std::size_t k_max, std::uint64_t seed,
                                       std::size_t trials) {
  return parallel_map<BaselineTrace>(trials, [&](std::size_t t) { return sample_run(inst, k_max, seed + t); });
}

}  // namespace psdsparse
