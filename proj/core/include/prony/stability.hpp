#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prony/common.hpp"
#include "prony/model.hpp"

namespace prony {

/// The (l+1) x (l+1) block D_i: identity with last column
/// (0, a_{i,0}, ..., a_{i,l-1})^T.
ComplexMatrix jacobian_block(const std::vector<Complex>& magnitudes);

/// Closed-form D_i^{-1}: identity with last column
/// (0, -a_{i,0}/a_{i,l-1}, ..., -a_{i,l-2}/a_{i,l-1}, 1/a_{i,l-1})^T.
ComplexMatrix jacobian_block_inverse(const std::vector<Complex>& magnitudes);

/// Jacobian of the Prony map, built as U(xi_1, l_1+1, ..., xi_n, l_n+1) times
/// diag(D_1, ..., D_n). Columns follow the ParameterVector order; `rows`
/// defaults to R (square).
ComplexMatrix jacobian(const ConfluentModel& model,
                       std::optional<int> rows = std::nullopt);

struct Criticality {
  bool critical = false;
  std::string reason;
};

/// Default tolerance: 1e-12 (1 + max|xi|) for node gaps and
/// 1e-12 max|a| for leading magnitudes.
Criticality is_critical(const ConfluentModel& model);
/// Single tolerance for both conditions.
Criticality is_critical(const ConfluentModel& model, double tol);

/// Inverse Jacobian diag(D_i^{-1}) U^{-1}(xi, l+1). Throws
/// SingularMatrixError at critical points.
ComplexMatrix inverse_jacobian(const ConfluentModel& model);

/// Best possible local point-wise accuracy. per_parameter[p] is the exact
/// first-order supremum eps * ||row_p(J^{-1})||_1 over |dm_k| <= eps.
struct AccuracyBounds {
  PerParameterValues per_parameter;
  double epsilon = 0.0;
  /// ||U^{-1}(xi, l+1)||_inf
  double c1 = 0.0;
  PerParameterValues row_l1_norms;
};

AccuracyBounds local_accuracy(const ConfluentModel& model, double epsilon);

struct TightnessProbe {
  std::vector<std::string> labels;
  /// |achieved error| / ACC_LOC for the worst-case perturbation of each
  /// parameter.
  std::vector<double> ratio;
};

/// For every parameter p, perturbs the exact moments by
/// dm_k = eps * conj(phase(J^{-1}_{p,k})), refines from the truth with
/// lsq_refine and reports achieved / predicted error. Empty for eps = 0.
TightnessProbe accuracy_tightness_probe(const ConfluentModel& model,
                                        double epsilon);

/// Error scalings of the algebraic Prony method as eps -> 0. The constant
/// C(Xi) is not computable and is reported as 1, so the magnitude estimate
/// is only meaningful as a slope.
struct PronyStabilityEstimate {
  double u = 0.0;  // kappa_inf(U(xi, l, C rows))
  double b = 0.0;  // kappa_inf(B)
  double xi_bound = 0.0;
  std::vector<double> predicted_node_error;  // (u^2 b eps)^{1/l_j}
  double predicted_magnitude_error = 0.0;    // u (u^2 b eps)^{1/max l}
};

PronyStabilityEstimate prony_stability_estimate(const ConfluentModel& model,
                                                double epsilon);

}  // namespace prony
