#include "prony/forward.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace prony {

double falling_factorial(int k, int j) {
  if (k < 0 || j < 0) throw InputError("falling_factorial needs k, j >= 0");
  if (j > k) return 0.0;
  double product = 1.0;
  for (int t = 0; t < j; ++t) product *= static_cast<double>(k - t);
  return product;
}

MeasurementVector prony_map(const ConfluentModel& model, int num_measurements) {
  check_model(model);
  if (num_measurements < 1) throw InputError("need at least one measurement");
  const int S = num_measurements;
  MeasurementVector m = MeasurementVector::Zero(S);
  std::vector<Complex> powers(S);
  for (int i = 0; i < model.num_nodes(); ++i) {
    const Complex xi = model.nodes[i];
    const auto& a = model.magnitudes[i];
    const int l = model.multiplicities[i];
    // Running power: powers[t] = xi^t, with 0^0 = 1.
    Complex running(1.0, 0.0);
    for (int t = 0; t < S; ++t) {
      powers[t] = running;
      running *= xi;
    }
    for (int k = 0; k < S; ++k) {
      Complex sum(0.0, 0.0);
      double ff = 1.0;  // (k)_j
      for (int j = 0; j < l && j <= k; ++j) {
        sum += a[j] * ff * powers[k - j];
        ff *= static_cast<double>(k - j);
      }
      m(k) += sum;
    }
  }
  return m;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix_seed(seed, stream)) {}

std::uint64_t CounterRng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

MeasurementVector perturb(const MeasurementVector& m, const NoiseSpec& noise) {
  if (!(noise.epsilon >= 0.0)) throw InputError("noise epsilon must be >= 0");
  MeasurementVector out = m;
  if (noise.epsilon == 0.0) return out;
  const double eps = noise.epsilon;
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    CounterRng rng(noise.seed, static_cast<std::uint64_t>(k));
    Complex delta;
    switch (noise.distribution) {
      case NoiseDistribution::kUniformBox: {
        const double half = eps / std::numbers::sqrt2;
        const double re = rng.uniform(-half, half);
        const double im = rng.uniform(-half, half);
        delta = {re, im};
        break;
      }
      case NoiseDistribution::kUniformPhase:
        delta = std::polar(eps, 2.0 * std::numbers::pi * rng.uniform());
        break;
    }
    out(k) += delta;
  }
  return out;
}

}  // namespace prony
