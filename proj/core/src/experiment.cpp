#include "prony/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "prony/forward.hpp"
#include "prony/stability.hpp"

namespace prony {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Complex with_modulus(Complex z, double modulus) {
  const double r = std::abs(z);
  return r == 0.0 ? Complex(modulus, 0.0) : z * (modulus / r);
}

double draw_real(CounterRng& rng, double bound) { return rng.uniform(-bound, bound); }

Complex draw_in_disk(CounterRng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  return std::polar(r, 2.0 * std::numbers::pi * rng.uniform());
}

std::vector<std::vector<Complex>> draw_magnitudes(const std::vector<int>& mult,
                                                  CounterRng& rng, bool complex_values,
                                                  double bound, double min_leading) {
  std::vector<std::vector<Complex>> mags;
  for (int l : mult) {
    std::vector<Complex> a(l);
    for (int j = 0; j < l; ++j) {
      do {
        a[j] = complex_values ? draw_in_disk(rng, bound) : Complex(draw_real(rng, bound));
      } while (j == l - 1 && std::abs(a[j]) < min_leading);
    }
    mags.push_back(std::move(a));
  }
  return mags;
}

}  // namespace

PerParameterValues match_parameters(const ConfluentModel& truth,
                                    const ConfluentModel& recovered) {
  check_model(truth);
  check_model(recovered);
  const int n = truth.num_nodes();
  {
    auto a = truth.multiplicities, b = recovered.multiplicities;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw InputError("multiplicity structures differ");
  }
  std::vector<int> perm(n), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = kInf;
  do {
    bool compatible = true;
    double cost = 0.0;
    for (int i = 0; i < n && compatible; ++i) {
      compatible = truth.multiplicities[i] == recovered.multiplicities[perm[i]];
      cost += std::abs(truth.nodes[i] - recovered.nodes[perm[i]]);
    }
    // NaN costs never win, so an all-NaN recovery still gets a matching.
    if (compatible && (best.empty() || cost < best_cost)) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  PerParameterValues errors;
  errors.labels = parameter_labels(truth.multiplicities);
  for (int i = 0; i < n; ++i) {
    const int r = best[i];
    for (int j = 0; j < truth.multiplicities[i]; ++j) {
      errors.values.push_back(std::abs(truth.magnitudes[i][j] - recovered.magnitudes[r][j]));
    }
    errors.values.push_back(std::abs(truth.nodes[i] - recovered.nodes[r]));
  }
  return errors;
}

const char* sweep_kind_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::kHighestCoeff: return "highest-coeff";
    case SweepKind::kPrevCoeff: return "prev-coeff";
    case SweepKind::kEpsilon: return "epsilon";
    case SweepKind::kOrder: return "order";
    case SweepKind::kSeparation: return "separation";
  }
  return "unknown";
}

SweepKind parse_sweep_kind(const std::string& name) {
  for (SweepKind k : {SweepKind::kHighestCoeff, SweepKind::kPrevCoeff,
                      SweepKind::kEpsilon, SweepKind::kOrder,
                      SweepKind::kSeparation}) {
    if (name == sweep_kind_name(k)) return k;
  }
  throw InputError("unknown sweep kind '" + name + "'");
}

ConfluentModel default_base_model(int degree, std::uint64_t seed, int num_nodes) {
  if (degree < 1 || num_nodes < 1) throw InputError("degree and node count must be >= 1");
  ConfluentModel model;
  for (int i = 0; i < num_nodes; ++i) {
    model.nodes.emplace_back(static_cast<double>(i + 1) / (num_nodes + 1), 0.0);
  }
  model.multiplicities.assign(num_nodes, degree);
  CounterRng rng(seed, 0x6d61676eULL);
  model.magnitudes = draw_magnitudes(model.multiplicities, rng, false, 1.0, 0.2);
  return model;
}

ConfluentModel random_regular_model(const RandomModelSpec& spec, CounterRng& rng) {
  if (spec.max_nodes < 1 || spec.max_multiplicity < 1) {
    throw InputError("random model needs max_nodes, max_multiplicity >= 1");
  }
  ConfluentModel model;
  const int n = 1 + static_cast<int>(rng.next() % spec.max_nodes);
  do {
    model.multiplicities.clear();
    for (int i = 0; i < n; ++i) {
      model.multiplicities.push_back(1 + static_cast<int>(rng.next() % spec.max_multiplicity));
    }
  } while (spec.max_total_multiplicity > 0 &&
           total_multiplicity(model.multiplicities) > spec.max_total_multiplicity);

  for (int attempt = 0;; ++attempt) {
    if (attempt > 10000) throw InputError("cannot place nodes with the requested gap");
    model.nodes.clear();
    for (int i = 0; i < n; ++i) {
      model.nodes.push_back(spec.complex_values
                                ? draw_in_disk(rng, spec.max_node_modulus)
                                : Complex(draw_real(rng, spec.max_node_modulus)));
    }
    bool separated = true;
    for (int i = 0; i < n && separated; ++i) {
      for (int j = i + 1; j < n && separated; ++j) {
        separated = std::abs(model.nodes[i] - model.nodes[j]) >= spec.min_gap;
      }
    }
    if (separated) break;
  }
  model.magnitudes = draw_magnitudes(model.multiplicities, rng, spec.complex_values,
                                     spec.max_magnitude, spec.min_leading);
  return model;
}

int measurements_for(Method method, const ConfluentModel& model,
                     const SweepSpec& spec) {
  if (auto it = spec.measurements.find(method); it != spec.measurements.end()) {
    return it->second;
  }
  switch (method) {
    case Method::kLsq: return model.num_params();
    case Method::kApm: return 2 * model.num_nodes();
    case Method::kProny:
    case Method::kEsprit: return 2 * model.num_magnitudes();
  }
  return model.num_params();
}

std::pair<ConfluentModel, double> sweep_point(const SweepSpec& spec, double value) {
  ConfluentModel model = spec.base_model;
  double epsilon = spec.epsilon;
  switch (spec.kind) {
    case SweepKind::kHighestCoeff:
      model.magnitudes[0].back() = with_modulus(model.magnitudes[0].back(), value);
      break;
    case SweepKind::kPrevCoeff:
      if (model.multiplicities[0] < 2) {
        throw InputError("prev-coeff sweep needs l_1 >= 2");
      }
      model.magnitudes[0][0] = with_modulus(model.magnitudes[0][0], value);
      break;
    case SweepKind::kEpsilon:
      epsilon = value;
      break;
    case SweepKind::kOrder: {
      const int degree = static_cast<int>(std::lround(value));
      if (degree < 1 || std::abs(value - degree) > 1e-9) {
        throw InputError("order sweep values must be positive integers");
      }
      model.multiplicities.assign(model.num_nodes(), degree);
      CounterRng rng(spec.seed, 0x6f72646572ULL + static_cast<std::uint64_t>(degree));
      model.magnitudes = draw_magnitudes(model.multiplicities, rng, false, 1.0, 0.2);
      break;
    }
    case SweepKind::kSeparation:
      if (model.num_nodes() < 2) throw InputError("separation sweep needs two nodes");
      model.nodes[1] = model.nodes[0] + value;
      break;
  }
  return {model, epsilon};
}

ExperimentTable run_sweep(const SweepSpec& spec) {
  if (spec.grid.empty()) throw InputError("sweep grid is empty");
  if (spec.trials < 1) throw InputError("sweep needs at least one trial");
  if (spec.methods.empty()) throw InputError("sweep needs at least one method");
  const bool increasing = spec.grid.size() < 2 || spec.grid[1] > spec.grid[0];
  for (std::size_t g = 1; g < spec.grid.size(); ++g) {
    if (increasing ? !(spec.grid[g] > spec.grid[g - 1])
                   : !(spec.grid[g] < spec.grid[g - 1])) {
      throw InputError("sweep grid must be strictly monotone");
    }
  }
  check_model(spec.base_model);

  ExperimentTable table;
  int skipped = 0;
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    const double value = spec.grid[g];
    const auto [model, epsilon] = sweep_point(spec, value);
    if (const Criticality c = is_critical(model); c.critical) {
      ++skipped;
      table.metadata.emplace_back("skipped", std::to_string(value) + ": " + c.reason);
      continue;
    }
    const AccuracyBounds bounds = local_accuracy(model, epsilon);
    const auto& labels = bounds.per_parameter.labels;

    int max_measurements = 0;
    for (Method method : spec.methods) {
      max_measurements = std::max(max_measurements, measurements_for(method, model, spec));
    }
    const MeasurementVector exact = prony_map(model, max_measurements);

    for (int trial = 0; trial < spec.trials; ++trial) {
      const NoiseSpec noise{epsilon,
                            mix_seed(mix_seed(spec.seed, g), static_cast<std::uint64_t>(trial)),
                            spec.noise};
      const MeasurementVector noisy = perturb(exact, noise);
      for (Method method : spec.methods) {
        const MeasurementVector m = noisy.head(measurements_for(method, model, spec));
        std::vector<double> errors(labels.size(), kInf);
        try {
          SolveReport report;
          switch (method) {
            case Method::kLsq: report = lsq_refine(m, model, spec.solver); break;
            case Method::kProny:
              report = prony_solve(m, model.multiplicities, spec.solver);
              break;
            case Method::kEsprit:
              report = esprit_solve(m, model.multiplicities, spec.solver);
              break;
            case Method::kApm:
              report = apm_solve(m, model.multiplicities, spec.solver);
              break;
          }
          errors = match_parameters(model, report.recovered).values;
        } catch (const NumericalError&) {
        }
        for (std::size_t p = 0; p < labels.size(); ++p) {
          const double e = std::isfinite(errors[p]) ? errors[p] : kInf;
          table.rows.push_back({value, trial, method, labels[p], e,
                                bounds.per_parameter.values[p]});
        }
      }
    }
  }

  std::ostringstream grid;
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    grid << (g ? " " : "") << spec.grid[g];
  }
  std::ostringstream methods;
  for (std::size_t k = 0; k < spec.methods.size(); ++k) {
    methods << (k ? "," : "") << method_name(spec.methods[k]);
  }
  table.metadata.insert(table.metadata.begin(),
                        {{"kind", sweep_kind_name(spec.kind)},
                         {"grid", grid.str()},
                         {"epsilon", std::to_string(spec.epsilon)},
                         {"trials", std::to_string(spec.trials)},
                         {"seed", std::to_string(spec.seed)},
                         {"methods", methods.str()},
                         {"skipped_points", std::to_string(skipped)},
                         {"version", "prony " PRONY_VERSION_STRING}});
  return table;
}

std::vector<std::pair<double, double>> median_errors(const ExperimentTable& table,
                                                     Method method,
                                                     const std::string& param) {
  std::vector<double> values;
  std::map<double, std::vector<double>> errors;
  for (const auto& row : table.rows) {
    if (row.method != method || row.param != param) continue;
    if (errors.find(row.sweep_value) == errors.end()) values.push_back(row.sweep_value);
    auto& bucket = errors[row.sweep_value];
    if (std::isfinite(row.abs_error) && row.abs_error > 0.0) bucket.push_back(row.abs_error);
  }
  std::vector<std::pair<double, double>> medians;
  for (double v : values) {
    auto& e = errors[v];
    if (e.empty()) continue;
    std::sort(e.begin(), e.end());
    const std::size_t mid = e.size() / 2;
    const double median = e.size() % 2 ? e[mid] : 0.5 * (e[mid - 1] + e[mid]);
    medians.emplace_back(v, median);
  }
  return medians;
}

double slope_estimate(const ExperimentTable& table, Method method,
                      const std::string& param) {
  const auto medians = median_errors(table, method, param);
  std::vector<std::pair<double, double>> points;
  for (auto [v, e] : medians) {
    if (v > 0.0) points.emplace_back(std::log10(v), std::log10(e));
  }
  if (points.size() < 3) {
    throw NumericalError("no data: fewer than 3 finite grid points for " +
                         std::string(method_name(method)) + "/" + param);
  }
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= points.size();
  my /= points.size();
  double sxy = 0.0, sxx = 0.0;
  for (auto [x, y] : points) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0.0) throw NumericalError("degenerate sweep grid for slope fit");
  return sxy / sxx;
}

int failure_count(const ExperimentTable& table, Method method) {
  std::vector<std::pair<double, int>> failed;
  for (const auto& row : table.rows) {
    if (row.method != method || std::isfinite(row.abs_error)) continue;
    const std::pair<double, int> key{row.sweep_value, row.trial};
    if (std::find(failed.begin(), failed.end(), key) == failed.end()) {
      failed.push_back(key);
    }
  }
  return static_cast<int>(failed.size());
}

std::vector<double> parse_grid(const std::string& text, bool linear_default) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
  if (parts.size() < 3 || parts.size() > 4) {
    throw InputError("grid must look like lo:hi:points[:log|lin], got '" + text + "'");
  }
  double lo = 0.0, hi = 0.0;
  int points = 0;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    points = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw InputError("cannot parse grid '" + text + "'");
  }
  bool linear = linear_default;
  if (parts.size() == 4) {
    if (parts[3] == "lin") {
      linear = true;
    } else if (parts[3] == "log") {
      linear = false;
    } else {
      throw InputError("grid spacing must be 'log' or 'lin'");
    }
  }
  if (points < 1) throw InputError("grid needs at least one point");
  if (!linear && (lo <= 0.0 || hi <= 0.0)) {
    throw InputError("log-spaced grid needs positive bounds");
  }
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    grid.push_back(linear ? lo + t * (hi - lo)
                          : std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo))));
  }
  if (points > 1) {
    grid.front() = lo;
    grid.back() = hi;
  }
  return grid;
}

}  // namespace prony
