#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace prony {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst observed value of the checked quantity.
  double worst = 0.0;
  double threshold = 0.0;
  int cases = 0;
};

/// Randomized self-checks of the exact identities and solver round trips:
///   factorization  ||M_C - U B U^T|| / max(1, ||M_C||) <= 1e-12
///   determinant    LU determinant vs closed form, relative 1e-8
///   jacobian-fd    analytic Jacobian vs central differences, relative 1e-6
///   round-trip     noise-free Prony and ESPRIT recovery, 1e-6 (1e-9 simple)
std::vector<CheckResult> run_property_checks(std::uint64_t seed, int cases = 100);

}  // namespace prony
