#include "prony/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "prony/experiment.hpp"
#include "prony/forward.hpp"
#include "prony/stability.hpp"
#include "prony/structmat.hpp"

namespace prony {

namespace {

CheckResult factorization_check(std::uint64_t seed, int cases) {
  CheckResult result{"factorization", true, 0.0, 1e-12, cases};
  CounterRng rng(seed, 1);
  RandomModelSpec spec;
  spec.max_nodes = 4;
  spec.max_total_multiplicity = 8;
  spec.max_node_modulus = 2.0;
  spec.max_magnitude = 10.0;
  for (int c = 0; c < cases; ++c) {
    const double r = factorization_residual(random_regular_model(spec, rng));
    result.worst = std::max(result.worst, r);
  }
  result.passed = result.worst <= result.threshold;
  return result;
}

CheckResult determinant_check(std::uint64_t seed, int cases) {
  CheckResult result{"determinant", true, 0.0, 1e-8, cases};
  CounterRng rng(seed, 2);
  RandomModelSpec spec;
  spec.max_nodes = 4;
  spec.max_total_multiplicity = 8;
  spec.max_node_modulus = 2.0;
  spec.min_gap = 0.2;
  for (int c = 0; c < cases; ++c) {
    ConfluentModel model;
    do {
      model = random_regular_model(spec, rng);
    } while (std::any_of(model.nodes.begin(), model.nodes.end(),
                         [](Complex z) { return std::abs(z) < 0.1; }));
    const int C = model.num_magnitudes();
    const Complex closed = confluent_vandermonde_det(model.nodes, model.multiplicities);
    const Complex lu =
        confluent_vandermonde(model.nodes, model.multiplicities, C).fullPivLu().determinant();
    result.worst = std::max(result.worst, std::abs(lu - closed) / std::abs(closed));
  }
  result.passed = result.worst <= result.threshold;
  return result;
}

CheckResult jacobian_check(std::uint64_t seed, int cases) {
  CheckResult result{"jacobian-fd", true, 0.0, 1e-6, cases};
  CounterRng rng(seed, 3);
  RandomModelSpec spec;
  spec.max_total_multiplicity = 6;
  for (int c = 0; c < cases; ++c) {
    const ConfluentModel model = random_regular_model(spec, rng);
    const int R = model.num_params();
    const ComplexMatrix j = jacobian(model);
    const ParameterVector x = encode_params(model);
    for (int p = 0; p < R; ++p) {
      const double h = 1e-6 * (1.0 + std::abs(x(p)));
      for (Complex direction : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
        ParameterVector plus = x, minus = x;
        plus(p) += h * direction;
        minus(p) -= h * direction;
        const ComplexVector fd =
            (prony_map(decode_params(plus, model.multiplicities), R) -
             prony_map(decode_params(minus, model.multiplicities), R)) /
            (2.0 * h * direction);
        for (int k = 0; k < R; ++k) {
          const double err = std::abs(fd(k) - j(k, p)) / std::max(1.0, std::abs(j(k, p)));
          result.worst = std::max(result.worst, err);
        }
      }
    }
  }
  result.passed = result.worst <= result.threshold;
  return result;
}

CheckResult round_trip_check(std::uint64_t seed, int cases) {
  // threshold is reported for the confluent case; simple models use 1e-9.
  CheckResult result{"round-trip", true, 0.0, 1e-6, cases};
  CounterRng rng(seed, 4);
  const RandomModelSpec spec;
  for (int c = 0; c < cases; ++c) {
    const ConfluentModel model = random_regular_model(spec, rng);
    const bool simple = std::all_of(model.multiplicities.begin(),
                                    model.multiplicities.end(),
                                    [](int l) { return l == 1; });
    const double tol = simple ? 1e-9 : 1e-6;
    const MeasurementVector m = prony_map(model, 2 * model.num_magnitudes());
    for (Method method : {Method::kProny, Method::kEsprit}) {
      double worst = std::numeric_limits<double>::infinity();
      try {
        const SolveReport report = method == Method::kProny
                                       ? prony_solve(m, model.multiplicities)
                                       : esprit_solve(m, model.multiplicities);
        const auto errors = match_parameters(model, report.recovered).values;
        worst = *std::max_element(errors.begin(), errors.end());
      } catch (const NumericalError&) {
      }
      // Scale onto the reported threshold so one number summarizes both.
      result.worst = std::max(result.worst, worst * (1e-6 / tol));
      if (!(worst <= tol)) result.passed = false;
    }
  }
  return result;
}

}  // namespace

std::vector<CheckResult> run_property_checks(std::uint64_t seed, int cases) {
  return {factorization_check(seed, cases), determinant_check(seed, cases),
          jacobian_check(seed, std::max(1, cases / 2)), round_trip_check(seed, cases)};
}

}  // namespace prony
