#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "psdsparse/baseline.hpp"
#include "psdsparse/greedy.hpp"

namespace psdsparse {

inline constexpr const char* kRunCsvHeader = "k,delta,error,bound,regime,log_potential,ratio";
inline constexpr const char* kBaselineCsvHeader = "trial,seed,k,error";

// %.17g, enough to round-trip any double.
std::string format_double(double x);

std::string format_run_csv(const GreedyTrace& trace);
std::string format_baseline_csv(const std::vector<BaselineTrace>& traces);

// Exit codes: 0 success, 1 any error (one "error: <Kind>: <detail>" line on
// `err`), 2 a violated guarantee during a greedy run.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace psdsparse
