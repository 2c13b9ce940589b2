#include "prony_cli/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "prony/checks.hpp"
#include "prony/experiment.hpp"
#include "prony/forward.hpp"
#include "prony/io.hpp"
#include "prony/solvers.hpp"
#include "prony/stability.hpp"

namespace prony::cli {

namespace {

struct ForwardArgs {
  std::string model;
  int num_measurements = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string noise = "box";
  std::string out;
};

struct SolveArgs {
  std::string measurements;
  std::string multiplicities;
  std::string method = "prony";
  std::string initial;
  std::string out;
  std::optional<int> hankel_rows;
  std::string esprit_shape = "rows";
  double cluster_tolerance = 0.1;
  int max_iterations = 50;
};

struct BoundsArgs {
  std::string model;
  double epsilon = 0.0;
  std::string out;
};

struct SweepArgs {
  std::string kind;
  std::string grid;
  int trials = 20;
  std::uint64_t seed = 1;
  std::string methods = "lsq,prony,esprit";
  std::string out;
  std::string summary;
  std::string base_model;
  int degree = 2;
  int num_nodes = 2;
  double epsilon = 1e-10;
  std::string noise = "box";
  std::optional<int> lsq_measurements;
  std::optional<int> prony_measurements;
  std::optional<int> esprit_measurements;
};

struct CheckArgs {
  std::uint64_t seed = 1;
  int cases = 100;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, sep);) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::vector<int> parse_multiplicities(const std::string& text) {
  std::vector<int> result;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    int l = 0;
    try {
      l = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw InputError("bad multiplicity '" + part + "'");
    }
    if (used != part.size() || l < 1) throw InputError("bad multiplicity '" + part + "'");
    result.push_back(l);
  }
  if (result.empty()) throw InputError("--multiplicities is empty");
  return result;
}

NoiseDistribution parse_noise(const std::string& name) {
  if (name == "box") return NoiseDistribution::kUniformBox;
  if (name == "phase") return NoiseDistribution::kUniformPhase;
  throw InputError("unknown noise distribution '" + name + "'");
}

// Writes to `path`, or to `fallback` when path is empty or "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  write(file);
  if (!file) throw InputError("error writing " + path);
}

MeasurementVector read_measurements(const std::string& path) {
  if (path == "-") return read_measurements_csv(std::cin);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open measurement file " + path);
  return read_measurements_csv(in);
}

void run_forward(const ForwardArgs& a, std::ostream& out) {
  const ConfluentModel model = read_model_file(a.model);
  const int S = a.num_measurements > 0 ? a.num_measurements : 2 * model.num_magnitudes();
  MeasurementVector m = prony_map(model, S);
  if (a.epsilon > 0.0) m = perturb(m, {a.epsilon, a.seed, parse_noise(a.noise)});
  emit(a.out, out, [&](std::ostream& os) { write_measurements_csv(os, m); });
}

void run_solve(const SolveArgs& a, std::ostream& out) {
  const MeasurementVector m = read_measurements(a.measurements);
  const std::vector<int> mult = parse_multiplicities(a.multiplicities);
  SolverOptions opts;
  opts.hankel_rows = a.hankel_rows;
  opts.cluster_tolerance = a.cluster_tolerance;
  opts.max_lsq_iterations = a.max_iterations;
  if (a.esprit_shape == "rows") {
    opts.esprit_shape = EspritShape::kRowsTwiceCols;
  } else if (a.esprit_shape == "cols") {
    opts.esprit_shape = EspritShape::kColsTwiceRows;
  } else {
    throw InputError("--esprit-shape must be rows or cols");
  }
  SolveReport report;
  switch (parse_method(a.method)) {
    case Method::kProny:
      report = prony_solve(m, mult, opts);
      break;
    case Method::kEsprit:
      report = esprit_solve(m, mult, opts);
      break;
    case Method::kApm:
      report = apm_solve(m, mult, opts);
      break;
    case Method::kLsq: {
      ConfluentModel initial;
      if (!a.initial.empty()) {
        initial = read_model_file(a.initial);
        if (initial.multiplicities != mult) {
          throw InputError("--initial multiplicities differ from --multiplicities");
        }
      } else {
        initial = esprit_solve(m, mult, opts).recovered;
      }
      report = lsq_refine(m, initial, opts);
      break;
    }
  }
  emit(a.out, out, [&](std::ostream& os) { os << solve_report_to_json(report) << '\n'; });
}

void run_bounds(const BoundsArgs& a, std::ostream& out) {
  if (a.epsilon < 0.0) throw InputError("--epsilon must be nonnegative");
  const AccuracyBounds bounds = local_accuracy(read_model_file(a.model), a.epsilon);
  emit(a.out, out, [&](std::ostream& os) { write_bounds_csv(os, bounds); });
}

void run_sweep_command(const SweepArgs& a, std::ostream& out) {
  SweepSpec spec;
  spec.kind = parse_sweep_kind(a.kind);
  spec.grid = parse_grid(a.grid, spec.kind == SweepKind::kOrder);
  spec.trials = a.trials;
  spec.seed = a.seed;
  spec.epsilon = a.epsilon;
  spec.noise = parse_noise(a.noise);
  spec.methods.clear();
  for (const auto& name : split(a.methods, ',')) spec.methods.push_back(parse_method(name));
  if (spec.methods.empty()) throw InputError("--methods is empty");
  spec.base_model = a.base_model.empty()
                        ? default_base_model(a.degree, a.seed, a.num_nodes)
                        : read_model_file(a.base_model);
  if (a.lsq_measurements) spec.measurements[Method::kLsq] = *a.lsq_measurements;
  if (a.prony_measurements) spec.measurements[Method::kProny] = *a.prony_measurements;
  if (a.esprit_measurements) spec.measurements[Method::kEsprit] = *a.esprit_measurements;

  const ExperimentTable table = run_sweep(spec);
  emit(a.out, out, [&](std::ostream& os) { write_table_csv(os, table); });
  emit(a.summary, out,
       [&](std::ostream& os) { os << sweep_summary_json(spec, table) << '\n'; });
}

int run_check(const CheckArgs& a, std::ostream& out) {
  if (a.cases < 1) throw InputError("--cases must be positive");
  bool all = true;
  for (const CheckResult& r : run_property_checks(a.seed, a.cases)) {
    char line[160];
    std::snprintf(line, sizeof line, "%-4s %-14s worst=%.3e threshold=%.1e cases=%d\n",
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.worst, r.threshold,
                  r.cases);
    out << line;
    all = all && r.passed;
  }
  return all ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confluent Prony systems: forward map, solvers, accuracy bounds, sweeps",
               "prony"};
  app.require_subcommand(1);

  ForwardArgs fwd;
  auto* forward = app.add_subcommand("forward", "model JSON -> measurement CSV");
  forward->add_option("model", fwd.model, "model JSON file")->required();
  forward->add_option("-S,--num-measurements", fwd.num_measurements,
                      "number of moments (default 2C)");
  forward->add_option("--epsilon", fwd.epsilon, "noise level (0 = exact)")
      ->check(CLI::NonNegativeNumber);
  forward->add_option("--seed", fwd.seed, "noise seed");
  forward->add_option("--noise", fwd.noise, "box | phase")->capture_default_str();
  forward->add_option("-o,--out", fwd.out, "output CSV (default stdout)");

  SolveArgs sol;
  auto* solve = app.add_subcommand("solve", "measurement CSV -> recovered model JSON");
  solve->add_option("measurements", sol.measurements, "measurement CSV ('-' = stdin)")
      ->required();
  solve->add_option("-l,--multiplicities", sol.multiplicities, "l1,l2,...")->required();
  solve->add_option("-m,--method", sol.method, "prony | esprit | apm | lsq")
      ->capture_default_str();
  solve->add_option("--initial", sol.initial,
                    "initial model JSON for lsq (default: ESPRIT estimate)");
  solve->add_option("--hankel-rows", sol.hankel_rows, "Prony Hankel rows");
  solve->add_option("--esprit-shape", sol.esprit_shape, "rows | cols")
      ->capture_default_str();
  solve->add_option("--cluster-tolerance", sol.cluster_tolerance)->capture_default_str();
  solve->add_option("--max-iterations", sol.max_iterations)->capture_default_str();
  solve->add_option("-o,--out", sol.out, "output JSON (default stdout)");

  BoundsArgs bnd;
  auto* bounds = app.add_subcommand("bounds", "model JSON -> local accuracy CSV");
  bounds->add_option("model", bnd.model, "model JSON file")->required();
  bounds->add_option("--epsilon", bnd.epsilon, "measurement error level")->required();
  bounds->add_option("-o,--out", bnd.out, "output CSV (default stdout)");

  SweepArgs swp;
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep experiment");
  sweep->add_option("--kind", swp.kind, "highest-coeff | prev-coeff | epsilon | order | separation")
      ->required();
  sweep->add_option("--grid", swp.grid, "lo:hi:points[:log|lin]")->required();
  sweep->add_option("--trials", swp.trials)->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--seed", swp.seed)->capture_default_str();
  sweep->add_option("--methods", swp.methods)->capture_default_str();
  sweep->add_option("--out", swp.out, "table CSV")->required();
  sweep->add_option("--summary", swp.summary, "slope summary JSON (default stdout)");
  sweep->add_option("--base-model", swp.base_model, "base model JSON (default: generated)");
  sweep->add_option("--degree", swp.degree, "uniform multiplicity of the generated base model")
      ->capture_default_str()
      ->check(CLI::Range(1, 6));
  sweep->add_option("--num-nodes", swp.num_nodes)->capture_default_str()->check(CLI::Range(1, 6));
  sweep->add_option("--epsilon", swp.epsilon)->capture_default_str();
  sweep->add_option("--noise", swp.noise, "box | phase")->capture_default_str();
  sweep->add_option("--lsq-measurements", swp.lsq_measurements);
  sweep->add_option("--prony-measurements", swp.prony_measurements);
  sweep->add_option("--esprit-measurements", swp.esprit_measurements);

  CheckArgs chk;
  auto* check = app.add_subcommand("check", "run the randomized self-checks");
  check->add_option("--seed", chk.seed)->capture_default_str();
  check->add_option("--cases", chk.cases)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*forward) run_forward(fwd, out);
    if (*solve) run_solve(sol, out);
    if (*bounds) run_bounds(bnd, out);
    if (*sweep) run_sweep_command(swp, out);
    if (*check) return run_check(chk, out);
  } catch (const InputError& e) {
    err << "prony: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "prony: numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "prony: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace prony::cli
