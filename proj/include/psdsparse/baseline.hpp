#pragma once

// The i.i.d. sampling scheme the greedy construction derandomises: draw
// indices from the categorical distribution lambda and track the same
// per-prefix error. There is no deterministic bound to compare against.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "psdsparse/instance.hpp"

namespace psdsparse {

struct BaselineTrace {
  std::uint64_t seed = 0;
  std::vector<std::size_t> indices;  // 0-based
  std::vector<double> errors;        // errors[k-1] = ||(1/k) sum_{r<=k} A_{i_r} - Id||
};

// Inverse-CDF sampling over the cumulative weights with the counter-based Rng.
std::vector<std::size_t> sample_indices(const Instance& inst, std::size_t k_max, std::uint64_t seed);

BaselineTrace sample_run(const Instance& inst, std::size_t k_max, std::uint64_t seed);

// Independent runs for seeds seed, seed + 1, ..., in parallel.
std::vector<BaselineTrace> sample_runs(const Instance& inst, std::size_t k_max, std::uint64_t seed,
                                       std::size_t trials);

}  // namespace psdsparse
