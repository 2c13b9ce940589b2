#include "prony/stability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "prony/forward.hpp"
#include "prony/solvers.hpp"
#include "prony/structmat.hpp"

namespace prony {

namespace {

std::vector<int> extended_multiplicities(const ConfluentModel& model) {
  std::vector<int> ext = model.multiplicities;
  for (int& l : ext) ++l;
  return ext;
}

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks) {
  Eigen::Index size = 0;
  for (const auto& b : blocks) size += b.rows();
  ComplexMatrix out = ComplexMatrix::Zero(size, size);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    out.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  return out;
}

Criticality check_critical(const ConfluentModel& model, double node_tol,
                           double magnitude_tol) {
  check_model(model);
  const int n = model.num_nodes();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(model.nodes[i] - model.nodes[j]) <= node_tol) {
        return {true, "coincident nodes xi[" + std::to_string(i + 1) +
                          "] and xi[" + std::to_string(j + 1) + "]"};
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(model.leading(i)) <= magnitude_tol) {
      return {true, "vanishing leading magnitude a[" + std::to_string(i + 1) +
                        "][" + std::to_string(model.multiplicities[i] - 1) + "]"};
    }
  }
  return {};
}

struct InverseFactors {
  ComplexMatrix u_inverse;  // U(xi, l+1)^{-1}, R x R
  ComplexMatrix d_inverse;  // diag(D_i^{-1})
};

InverseFactors inverse_factors(const ConfluentModel& model) {
  if (const Criticality c = is_critical(model); c.critical) {
    throw SingularMatrixError("Jacobian is singular at a critical point: " +
                              c.reason);
  }
  const ComplexMatrix u = confluent_vandermonde(
      model.nodes, extended_multiplicities(model), model.num_params());
  Eigen::FullPivLU<ComplexMatrix> lu(u);
  if (!lu.isInvertible()) {
    throw SingularMatrixError("confluent Vandermonde factor is singular");
  }
  std::vector<ComplexMatrix> blocks;
  for (const auto& a : model.magnitudes) blocks.push_back(jacobian_block_inverse(a));
  return {lu.inverse(), block_diagonal(blocks)};
}

}  // namespace

ComplexMatrix jacobian_block(const std::vector<Complex>& magnitudes) {
  const auto l = static_cast<Eigen::Index>(magnitudes.size());
  ComplexMatrix d = ComplexMatrix::Identity(l + 1, l + 1);
  d(0, l) = 0.0;
  for (Eigen::Index j = 0; j < l; ++j) d(j + 1, l) = magnitudes[j];
  return d;
}

ComplexMatrix jacobian_block_inverse(const std::vector<Complex>& magnitudes) {
  const auto l = static_cast<Eigen::Index>(magnitudes.size());
  const Complex lead = magnitudes.back();
  if (lead == Complex(0.0, 0.0)) {
    throw SingularMatrixError("D block is singular: zero leading magnitude");
  }
  ComplexMatrix d = ComplexMatrix::Identity(l + 1, l + 1);
  d(0, l) = 0.0;
  for (Eigen::Index j = 1; j < l; ++j) d(j, l) = -magnitudes[j - 1] / lead;
  d(l, l) = 1.0 / lead;
  return d;
}

ComplexMatrix jacobian(const ConfluentModel& model, std::optional<int> rows) {
  check_model(model);
  const int num_rows = rows.value_or(model.num_params());
  const ComplexMatrix u = confluent_vandermonde(
      model.nodes, extended_multiplicities(model), num_rows);
  std::vector<ComplexMatrix> blocks;
  for (const auto& a : model.magnitudes) blocks.push_back(jacobian_block(a));
  return u * block_diagonal(blocks);
}

Criticality is_critical(const ConfluentModel& model) {
  check_model(model);
  double max_node = 0.0, max_magnitude = 0.0;
  for (const Complex& xi : model.nodes) max_node = std::max(max_node, std::abs(xi));
  for (const auto& a : model.magnitudes) {
    for (const Complex& v : a) max_magnitude = std::max(max_magnitude, std::abs(v));
  }
  return check_critical(model, 1e-12 * (1.0 + max_node), 1e-12 * max_magnitude);
}

Criticality is_critical(const ConfluentModel& model, double tol) {
  return check_critical(model, tol, tol);
}

ComplexMatrix inverse_jacobian(const ConfluentModel& model) {
  const InverseFactors f = inverse_factors(model);
  return f.d_inverse * f.u_inverse;
}

AccuracyBounds local_accuracy(const ConfluentModel& model, double epsilon) {
  if (!(epsilon >= 0.0)) throw InputError("epsilon must be >= 0");
  const InverseFactors f = inverse_factors(model);
  const ComplexMatrix j_inverse = f.d_inverse * f.u_inverse;

  AccuracyBounds bounds;
  bounds.epsilon = epsilon;
  bounds.c1 = infinity_norm(f.u_inverse);
  const auto labels = parameter_labels(model.multiplicities);
  bounds.per_parameter.labels = labels;
  bounds.row_l1_norms.labels = labels;
  for (Eigen::Index p = 0; p < j_inverse.rows(); ++p) {
    const double row = j_inverse.row(p).cwiseAbs().sum();
    bounds.row_l1_norms.values.push_back(row);
    bounds.per_parameter.values.push_back(epsilon * row);
  }
  return bounds;
}

TightnessProbe accuracy_tightness_probe(const ConfluentModel& model,
                                        double epsilon) {
  TightnessProbe probe;
  if (epsilon == 0.0) return probe;
  const ComplexMatrix j_inverse = inverse_jacobian(model);
  const AccuracyBounds bounds = local_accuracy(model, epsilon);
  const int R = model.num_params();
  const MeasurementVector exact = prony_map(model, R);
  const ParameterVector truth = encode_params(model);

  for (int p = 0; p < R; ++p) {
    MeasurementVector noisy = exact;
    for (int k = 0; k < R; ++k) {
      const Complex g = j_inverse(p, k);
      // Aligns every term of row_p . dm with the real axis.
      if (std::abs(g) > 0.0) noisy(k) += epsilon * std::conj(g) / std::abs(g);
    }
    const SolveReport fit = lsq_refine(noisy, model);
    const double achieved = std::abs(encode_params(fit.recovered)(p) - truth(p));
    probe.labels.push_back(bounds.per_parameter.labels[p]);
    probe.ratio.push_back(achieved / bounds.per_parameter.values[p]);
  }
  return probe;
}

PronyStabilityEstimate prony_stability_estimate(const ConfluentModel& model,
                                                double epsilon) {
  if (!(epsilon >= 0.0)) throw InputError("epsilon must be >= 0");
  if (const Criticality c = is_critical(model); c.critical) {
    throw DegenerateInputError("model is critical: " + c.reason);
  }
  const int C = model.num_magnitudes();
  PronyStabilityEstimate est;
  est.u = condition_number(
      confluent_vandermonde(model.nodes, model.multiplicities, C));
  est.b = condition_number(magnitude_block_matrix(model));
  for (const Complex& xi : model.nodes) {
    est.xi_bound = std::max(est.xi_bound, std::abs(xi));
  }
  const double base = est.u * est.u * est.b * epsilon;
  int max_l = 0;
  for (int l : model.multiplicities) {
    est.predicted_node_error.push_back(std::pow(base, 1.0 / l));
    max_l = std::max(max_l, l);
  }
  est.predicted_magnitude_error = est.u * std::pow(base, 1.0 / max_l);
  return est;
}

}  // namespace prony
