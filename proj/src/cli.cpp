#include "psdsparse/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "psdsparse/instance.hpp"
#include "psdsparse/verify.hpp"

namespace psdsparse {

namespace {

constexpr int kExitError = 1;
constexpr int kExitViolation = 2;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path);
  f << text;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

struct Options {
  // generate
  std::string kind = "bases";
  std::size_t d = 0;
  std::size_t m = 0;
  std::size_t rank = 1;
  std::size_t bases = 1;
  double cond_cap = 1e6;
  std::string edges;
  // shared
  std::uint64_t seed = 0;
  std::string file;
  std::string out;
  // run
  std::string mode = "all-steps";
  std::size_t k_max = 0;
  std::size_t n = 0;
  std::string indices_out;
  // baseline / verify
  std::size_t trials = 1;
  std::string suite = "all";
  // required-n
  double epsilon = 1.0;
  double m_bound = 1.0;
};

int cmd_generate(const Options& o, std::ostream& out) {
  Instance inst = [&] {
    if (o.kind == "bases") return gen_bases(o.d, o.bases, o.seed);
    if (o.kind == "random-psd") return gen_random_psd(o.d, o.m, o.rank, o.cond_cap, o.seed);
    if (o.kind == "graph") {
      const Graph g = o.edges.empty() ? random_connected_graph(o.d + 1, o.m, o.seed) : load_edge_list(o.edges);
      return gen_graph_edges(g, o.seed);
    }
    throw Error(ErrorKind::DomainError, "unknown kind " + o.kind);
  }();
  save_instance(o.out, inst);
  out << "wrote " << o.out << " d=" << inst.dim() << " m=" << inst.size() << " M=" << format_double(inst.norm_bound())
      << "\n";
  return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Instance inst = load_instance(o.file);
  out << "ok d=" << inst.dim() << " m=" << inst.size() << " M=" << format_double(inst.norm_bound()) << "\n";
  return 0;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(o.file);
  const double big_m = inst.norm_bound();
  const std::size_t d = inst.dim();
  std::size_t k_max = 0;
  Schedule schedule = Schedule::all_steps(big_m, d);
  if (o.mode == "all-steps") {
    k_max = o.k_max != 0 ? o.k_max : default_k_max(big_m, d);
  } else if (o.mode == "fixed-n") {
    const std::size_t n = o.n != 0 ? o.n : o.k_max;
    if (n == 0) throw Error(ErrorKind::DomainError, "fixed-n needs --n");
    schedule = Schedule::fixed_n(n, big_m, d);
    k_max = n;
  } else {
    throw Error(ErrorKind::DomainError, "unknown mode " + o.mode);
  }
  const GreedyTrace trace = run(inst, schedule, k_max);
  write_text(o.out, format_run_csv(trace));
  if (!o.indices_out.empty()) {
    std::ostringstream ids;
    for (std::size_t i : trace.indices) ids << i + 1 << "\n";
    write_text(o.indices_out, ids.str());
  }
  const StepRecord& last = trace.steps.back();
  out << "steps=" << trace.steps.size() << " final_error=" << format_double(last.error)
      << " final_bound=" << format_double(last.bound) << " max_ratio=" << format_double(trace.max_ratio) << "\n";
  if (trace.potential_violations != 0 || trace.recursion_violations != 0) {
    err << "error: BoundViolation: potential checks failed (step " << trace.potential_violations << ", recursion "
        << trace.recursion_violations << ")\n";
    return kExitViolation;
  }
  return 0;
}

int cmd_baseline(const Options& o, std::ostream& out) {
  const Instance inst = load_instance(o.file);
  if (o.trials < 1) throw Error(ErrorKind::DomainError, "trials must be >= 1");
  const auto traces = sample_runs(inst, o.k_max, o.seed, o.trials);
  write_text(o.out, format_baseline_csv(traces));
  double mean_final = 0.0;
  for (const auto& t : traces) mean_final += t.errors.back();
  mean_final /= static_cast<double>(traces.size());
  out << "trials=" << traces.size() << " k_max=" << o.k_max << " mean_final_error=" << format_double(mean_final)
      << "\n";
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> suites;
  if (o.suite == "all") {
    suites = suite_names();
  } else {
    suites = {o.suite};
  }
  bool all_pass = true;
  for (const auto& s : suites) {
    const CheckReport r = run_suite(s, o.trials, o.seed);
    out << "suite=" << r.suite << " trials=" << r.trials << " worst_slack=" << format_double(r.worst_slack)
        << " tolerance=" << format_double(r.tolerance) << " pass=" << (r.pass ? "true" : "false") << " seed=" << r.seed
        << "\n";
    if (!r.pass) {
      all_pass = false;
      err << "error: CheckFailed: suite " << r.suite << " worst_trial=" << r.worst_trial << " worst_seed=" << r.worst_seed
          << "\n";
    }
  }
  return all_pass ? 0 : kExitError;
}

int cmd_report(const Options& o, std::ostream& out) {
  std::ifstream in(o.file);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + o.file);
  std::string line;
  if (!std::getline(in, line) || line != kRunCsvHeader) {
    throw Error(ErrorKind::ParseError, "not a run CSV (header mismatch)");
  }
  std::size_t rows = 0, coarse = 0, violations = 0;
  double max_ratio = 0.0, final_error = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 7) throw Error(ErrorKind::ParseError, "row " + std::to_string(rows + 1) + " has wrong arity");
    ++rows;
    if (cells[4] == "coarse") ++coarse;
    final_error = std::stod(cells[2]);
    const double ratio = std::stod(cells[6]);
    max_ratio = std::max(max_ratio, ratio);
    if (ratio > 1.0 + kBoundSlack) ++violations;
  }
  out << "rows=" << rows << " coarse=" << coarse << " fine=" << rows - coarse << " final_error="
      << format_double(final_error) << " max_ratio=" << format_double(max_ratio) << " violations=" << violations
      << "\n";
  return violations == 0 ? 0 : kExitViolation;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_run_csv(const GreedyTrace& trace) {
  std::string s = kRunCsvHeader;
  s += '\n';
  for (const StepRecord& r : trace.steps) {
    s += std::to_string(r.k);
    for (double x : {r.delta, r.error, r.bound}) {
      s += ',';
      s += format_double(x);
    }
    s += r.coarse ? ",coarse," : ",fine,";
    s += format_double(r.log_potential);
    s += ',';
    s += format_double(r.error / r.bound);
    s += '\n';
  }
  return s;
}

std::string format_baseline_csv(const std::vector<BaselineTrace>& traces) {
  std::string s = kBaselineCsvHeader;
  s += '\n';
  for (std::size_t t = 0; t < traces.size(); ++t) {
    for (std::size_t k = 0; k < traces[t].errors.size(); ++k) {
      s += std::to_string(t) + ',' + std::to_string(traces[t].seed) + ',' + std::to_string(k + 1) + ',' +
           format_double(traces[t].errors[k]) + '\n';
    }
  }
  return s;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic greedy sparsification of isotropic PSD decompositions"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Write a generated instance as JSON");
  gen->add_option("--kind", o.kind, "bases | random-psd | graph")->check(CLI::IsMember({"bases", "random-psd", "graph"}));
  gen->add_option("--d", o.d, "Dimension (graph: vertices - 1)")->required();
  gen->add_option("--m", o.m, "Family size (graph: number of edges)");
  gen->add_option("--rank", o.rank, "random-psd: rank of each term");
  gen->add_option("--bases", o.bases, "bases: number of orthonormal bases");
  gen->add_option("--cond-cap", o.cond_cap, "random-psd: largest accepted cond(S)");
  gen->add_option("--edges", o.edges, "graph: read this edge list instead of sampling a graph");
  gen->add_option("--seed", o.seed)->required();
  gen->add_option("--out", o.out)->required();

  auto* val = app.add_subcommand("validate", "Check an instance file");
  val->add_option("file", o.file)->required();

  auto* run_cmd = app.add_subcommand("run", "Greedy run, one CSV row per prefix");
  run_cmd->add_option("file", o.file)->required();
  run_cmd->add_option("--mode", o.mode)->check(CLI::IsMember({"all-steps", "fixed-n"}));
  run_cmd->add_option("--k-max", o.k_max, "all-steps: number of steps");
  run_cmd->add_option("--n", o.n, "fixed-n: prescribed number of steps");
  run_cmd->add_option("--out", o.out)->required();
  run_cmd->add_option("--indices-out", o.indices_out, "Write the selected 1-based indices");

  auto* base = app.add_subcommand("baseline", "i.i.d. sampling from lambda");
  base->add_option("file", o.file)->required();
  base->add_option("--k-max", o.k_max)->required()->check(CLI::PositiveNumber);
  base->add_option("--seed", o.seed)->required();
  base->add_option("--trials", o.trials);
  base->add_option("--out", o.out)->required();

  auto* ver = app.add_subcommand("verify", "Randomised checks of the underlying inequalities");
  ver->add_option("--suite", o.suite)
      ->check(CLI::IsMember({"one-step", "mgf", "gt", "interp", "lower", "scalar", "psi", "all"}));
  ver->add_option("--trials", o.trials)->required();
  ver->add_option("--seed", o.seed)->required();

  auto* req = app.add_subcommand("required-n", "Steps sufficient for error <= epsilon");
  req->add_option("--epsilon", o.epsilon)->required();
  req->add_option("--m-bound", o.m_bound)->required();
  req->add_option("--d", o.d)->required();

  auto* rep = app.add_subcommand("report", "Summarise a run CSV");
  rep->add_option("file", o.file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (*gen) return cmd_generate(o, out);
    if (*val) return cmd_validate(o, out);
    if (*run_cmd) return cmd_run(o, out, err);
    if (*base) return cmd_baseline(o, out);
    if (*ver) return cmd_verify(o, out, err);
    if (*req) {
      out << required_n(o.epsilon, o.m_bound, o.d) << "\n";
      return 0;
    }
    if (*rep) return cmd_report(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::BoundViolation ? kExitViolation : kExitError;
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace psdsparse
