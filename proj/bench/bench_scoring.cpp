#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include "psdsparse/greedy.hpp"
#include "psdsparse/parallel.hpp"

using namespace psdsparse;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  std::printf("threads=%d\n", thread_count());
  std::printf("%4s %5s %12s %12s %8s %s\n", "d", "m", "serial_ms", "parallel_ms", "speedup", "identical");
  struct Shape {
    std::size_t d, rank, m;
  };
  for (const Shape s : {Shape{8, 2, 64}, Shape{16, 4, 64}, Shape{32, 8, 128}, Shape{64, 8, 256}}) {
    const Instance inst = gen_random_psd(s.d, s.m, s.rank, 1e6, 11);
    const CenteredFamily fam = center(inst);
    const GreedyTrace warm = run(inst, Schedule::all_steps(inst.norm_bound(), s.d), 8);
    const double delta = Schedule::all_steps(inst.norm_bound(), s.d).delta(9);
    std::vector<double> a, b;
    const double ts = best_of(5, [&] { a = score_candidates_serial(warm.running_sum, delta, fam); });
    const double tp = best_of(5, [&] { b = score_candidates(warm.running_sum, delta, fam); });
    std::printf("%4zu %5zu %12.3f %12.3f %8.2f %s\n", s.d, s.m, ts, tp, ts / tp, a == b ? "yes" : "NO");
  }
}
