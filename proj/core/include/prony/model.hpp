#pragma once

#include <span>
#include <string>
#include <vector>

#include "prony/common.hpp"

namespace prony {

/// Confluent Prony model: node xi_i carries l_i polynomial magnitudes
/// a_{i,0} ... a_{i,l_i-1}. The moments it generates are
///
///   m_k = sum_i sum_j a_{i,j} (k)_j xi_i^{k-j}.
struct ConfluentModel {
  std::vector<Complex> nodes;
  std::vector<int> multiplicities;
  std::vector<std::vector<Complex>> magnitudes;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  /// C = sum of multiplicities.
  int num_magnitudes() const;
  /// R = C + n.
  int num_params() const { return num_magnitudes() + num_nodes(); }

  /// Highest coefficient a_{i,l_i-1}.
  Complex leading(int i) const { return magnitudes[i].back(); }

  friend bool operator==(const ConfluentModel&, const ConfluentModel&) = default;
};

/// Builds a model, deriving the multiplicities from the magnitude lists.
ConfluentModel make_model(std::vector<Complex> nodes,
                          std::vector<std::vector<Complex>> magnitudes);

/// Throws InputError unless the field lengths are mutually consistent and
/// every multiplicity is positive.
void check_model(const ConfluentModel& model);

int total_multiplicity(std::span<const int> multiplicities);
int parameter_count(std::span<const int> multiplicities);

ParameterVector encode_params(const ConfluentModel& model);
ConfluentModel decode_params(const ParameterVector& v,
                             std::span<const int> multiplicities);

/// Values indexed like ParameterVector, with 1-based human-readable labels
/// "a[i][j]" (j is the 0-based derivative order) and "xi[i]".
struct PerParameterValues {
  std::vector<double> values;
  std::vector<std::string> labels;

  std::size_t size() const { return values.size(); }
  /// Index of a label, or -1.
  int find(const std::string& label) const;
};

std::vector<std::string> parameter_labels(std::span<const int> multiplicities);

/// Index of a_{i,j} / xi_i in the flat encoding (0-based i, j).
int magnitude_index(std::span<const int> multiplicities, int node, int order);
int node_index(std::span<const int> multiplicities, int node);

struct RegularityReport {
  bool regular = true;
  /// Pairs (i, j), 0-based, with |xi_i - xi_j| <= tol.
  std::vector<std::pair<int, int>> coincident_nodes;
  /// Nodes i with |a_{i,l_i-1}| <= tol.
  std::vector<int> vanishing_leading;

  std::string describe() const;
};

/// Checks the uniqueness conditions: pairwise distinct nodes and nonzero
/// highest coefficients, both with margin `tol`.
RegularityReport validate(const ConfluentModel& model, double tol);

}  // namespace prony
