#pragma once

#include <cstdint>

#include "prony/common.hpp"
#include "prony/model.hpp"

namespace prony {

/// (k)_j = k (k-1) ... (k-j+1); 1 for j = 0 and 0 for j > k.
double falling_factorial(int k, int j);

/// The Prony map: the first `num_measurements` moments of `model`.
/// Terms with j > k vanish, and 0^0 = 1.
MeasurementVector prony_map(const ConfluentModel& model, int num_measurements);

enum class NoiseDistribution {
  /// Real and imaginary parts independent in [-eps/sqrt2, eps/sqrt2].
  kUniformBox,
  /// |delta| = eps exactly, phase uniform on [0, 2 pi).
  kUniformPhase,
};

struct NoiseSpec {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  NoiseDistribution distribution = NoiseDistribution::kUniformBox;
};

/// Returns m + delta with max_k |delta_k| <= epsilon. delta_k depends only on
/// (seed, k), so the result is reproducible and independent of S.
MeasurementVector perturb(const MeasurementVector& m, const NoiseSpec& noise);

/// Counter-based generator: a SplitMix64 stream keyed by (seed, stream).
/// Draws are a pure function of (seed, stream, draw index).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// SplitMix64 finalizer, exposed for seed derivation.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace prony
