#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prony/common.hpp"
#include "prony/model.hpp"

namespace prony {

enum class Method { kProny, kEsprit, kApm, kLsq };

const char* method_name(Method method);
/// Inverse of method_name; throws InputError on unknown names.
Method parse_method(const std::string& name);

enum class EspritShape {
  kRowsTwiceCols,
  kColsTwiceRows,
  kCustom,
};

struct SolverOptions {
  /// Rows of the Prony Hankel system; nullopt uses every available row
  /// (S - C), which is square when S = 2C.
  std::optional<int> hankel_rows;
  EspritShape esprit_shape = EspritShape::kRowsTwiceCols;
  int esprit_rows = 0;  // used with kCustom
  int esprit_cols = 0;  // used with kCustom
  /// Largest admissible distance from a clustered root to its group mean.
  double cluster_tolerance = 0.1;
  int max_lsq_iterations = 50;
  /// Gauss-Newton stops when ||step||_inf <= tol * (1 + ||x||_inf).
  double lsq_step_tolerance = 1e-13;
};

struct SolveReport {
  ConfluentModel recovered;
  Method method = Method::kProny;
  /// Condition numbers, residuals, cluster spreads, iteration counts.
  std::map<std::string, double> diagnostics;
};

/// Roots of the polynomial with coefficients given highest degree first,
/// as eigenvalues of the balanced companion matrix. Leading zeros are
/// stripped; throws InputError for constant or zero polynomials.
std::vector<Complex> poly_roots(std::span<const Complex> coeffs_highest_first);

struct RootClusters {
  /// One node per entry of the multiplicity list, in that order.
  std::vector<Complex> nodes;
  /// Indices into the input roots forming each node's group.
  std::vector<std::vector<int>> groups;
  /// Largest distance from a root to its group mean.
  double max_spread = 0.0;
};

/// Groups `roots` into clusters of the prescribed sizes and replaces each
/// cluster by its arithmetic mean. Clusters are built by nearest-centroid
/// agglomerative merging restricted to merges that keep the prescribed size
/// multiset reachable. Throws ClusteringError when the spread exceeds `tol`.
RootClusters cluster_roots(std::span<const Complex> roots,
                           std::span<const int> multiplicities, double tol);

struct MagnitudeFit {
  std::vector<std::vector<Complex>> magnitudes;
  /// ||U a - m||_2
  double residual = 0.0;
};

/// Least-squares magnitudes for known nodes using all S measurements.
MagnitudeFit recover_magnitudes(std::span<const Complex> nodes,
                                std::span<const int> multiplicities,
                                const MeasurementVector& m);

/// Algebraic Prony method: Hankel solve for the annihilating polynomial,
/// rooting, clustering, and least-squares magnitudes.
SolveReport prony_solve(const MeasurementVector& m,
                        std::span<const int> multiplicities,
                        const SolverOptions& opts = {});

/// Eigenvalues of Phi = pinv(W_down) W_up for a basis W of the signal space.
std::vector<Complex> rotational_eigenvalues(const ComplexMatrix& basis);

/// (rows, cols) of the ESPRIT Hankel matrix for S measurements and C
/// signal dimensions. Throws InputError if no admissible shape exists.
std::pair<int, int> esprit_hankel_shape(int S, int C, const SolverOptions& opts);

/// ESPRIT: dominant left singular subspace of a rectangular Hankel matrix,
/// rotational invariance, clustering, least-squares magnitudes.
SolveReport esprit_solve(const MeasurementVector& m,
                         std::span<const int> multiplicities,
                         const SolverOptions& opts = {});

struct ApmNodes {
  /// All L roots of the singular-vector polynomial.
  std::vector<Complex> roots;
  /// ||root| - 1| per root; spurious roots sit away from the unit circle
  /// when the true nodes are unimodular.
  std::vector<double> unit_circle_distance;
  double smallest_singular_value = 0.0;
};

/// Node step of the approximate Prony method: smallest right singular
/// vector of the (S-L) x (L+1) Hankel matrix, then its polynomial's roots.
/// Requires S >= 2L.
ApmNodes apm_nodes(const MeasurementVector& m, int L);

/// APM for simple nodes: apm_nodes with L = n, then least-squares magnitudes.
/// Throws InputError for confluent multiplicities.
SolveReport apm_solve(const MeasurementVector& m,
                      std::span<const int> multiplicities,
                      const SolverOptions& opts = {});

/// Damped Gauss-Newton on ||prony_map(x, S) - m||_2^2, starting at `initial`
/// and using the analytic Jacobian. Complex parameters are treated as
/// (re, im) pairs. Never returns an iterate with a larger residual than the
/// start; diagnostics["converged"] is 0 when it stalls with a large step.
SolveReport lsq_refine(const MeasurementVector& m, const ConfluentModel& initial,
                       const SolverOptions& opts = {});

}  // namespace prony
