#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prony/forward.hpp"
#include "prony/model.hpp"
#include "prony/solvers.hpp"

namespace prony {

/// Absolute per-parameter errors |dxi_i|, |da_{i,j}| in truth's indexing.
/// Recovered nodes are matched to true nodes by the permutation (among
/// those preserving multiplicities) minimizing sum |dxi|; magnitudes are
/// then paired positionally. Throws InputError when the multiplicity
/// multisets differ.
PerParameterValues match_parameters(const ConfluentModel& truth,
                                    const ConfluentModel& recovered);

enum class SweepKind { kHighestCoeff, kPrevCoeff, kEpsilon, kOrder, kSeparation };

const char* sweep_kind_name(SweepKind kind);
SweepKind parse_sweep_kind(const std::string& name);

struct SweepSpec {
  SweepKind kind = SweepKind::kEpsilon;
  /// Sweep values; nonempty and strictly monotone.
  std::vector<double> grid;
  ConfluentModel base_model;
  double epsilon = 1e-10;
  int trials = 20;
  std::uint64_t seed = 1;
  std::vector<Method> methods = {Method::kLsq, Method::kProny, Method::kEsprit};
  /// Overrides of the per-method measurement count (default: R for lsq,
  /// 2C for prony and esprit).
  std::map<Method, int> measurements;
  SolverOptions solver;
  NoiseDistribution noise = NoiseDistribution::kUniformBox;
};

struct ExperimentRow {
  double sweep_value = 0.0;
  int trial = 0;
  Method method = Method::kLsq;
  std::string param;
  /// +inf when the solver failed at this point.
  double abs_error = 0.0;
  /// ACC_LOC of the parameter at the point's model and epsilon.
  double predicted_bound = 0.0;

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  friend bool operator==(const ExperimentTable&, const ExperimentTable&) = default;
};

/// Base model for sweeps: node i at (i + 1) / (n + 1), the expected order
/// statistics of n uniform draws on [0, 1] (1/3 and 2/3 for n = 2), uniform multiplicity `degree`, real magnitudes uniform in [-1, 1]
/// drawn from `seed`. Leading magnitudes are redrawn until |a| >= 0.2.
ConfluentModel default_base_model(int degree, std::uint64_t seed,
                                  int num_nodes = 2);

struct RandomModelSpec {
  int max_nodes = 3;
  int max_multiplicity = 3;
  double min_gap = 0.3;
  double min_leading = 0.2;
  double max_node_modulus = 1.0;
  double max_magnitude = 1.0;
  bool complex_values = true;
  /// Caps C = sum l_i; 0 means no cap.
  int max_total_multiplicity = 0;
};

/// Random regular model: node count and multiplicities uniform in range,
/// nodes uniform in the disk (or interval) of radius max_node_modulus with
/// pairwise gaps >= min_gap, magnitudes uniform with leading modulus >=
/// min_leading.
ConfluentModel random_regular_model(const RandomModelSpec& spec, CounterRng& rng);

int measurements_for(Method method, const ConfluentModel& model,
                     const SweepSpec& spec);

/// The model and noise level at one grid point.
std::pair<ConfluentModel, double> sweep_point(const SweepSpec& spec, double value);

/// Runs every (grid value, trial, method) combination. All methods see the
/// same noisy moment sequence (prefixes of it). Solver failures become rows
/// with abs_error = +inf. Output order is deterministic.
ExperimentTable run_sweep(const SweepSpec& spec);

/// (sweep value, median over finite trials of abs_error), grid order. Points
/// without a finite positive error are omitted.
std::vector<std::pair<double, double>> median_errors(const ExperimentTable& table,
                                                     Method method,
                                                     const std::string& param);

/// OLS slope of log10(median error) against log10(sweep value). Throws
/// NumericalError when fewer than 3 usable grid points remain.
double slope_estimate(const ExperimentTable& table, Method method,
                      const std::string& param);

/// Number of (value, trial) solves that failed for `method`.
int failure_count(const ExperimentTable& table, Method method);

/// "lo:hi:points[:log|lin]" -> grid values. Log spacing unless ":lin" is
/// given or `linear_default` is set.
std::vector<double> parse_grid(const std::string& text, bool linear_default = false);

}  // namespace prony
