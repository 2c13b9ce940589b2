#include "prony/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "prony/forward.hpp"
#include "prony/stability.hpp"
#include "prony/structmat.hpp"

namespace prony {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Parlett-Reinsch balancing: scale row/column pairs by powers of two until
// their norms are comparable. Leaves the eigenvalues unchanged.
void balance_companion(ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  const double gamma = 0.9;
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row_norm = 0.0, col_norm = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        row_norm += std::abs(a(i, j));
        col_norm += std::abs(a(j, i));
      }
      if (row_norm == 0.0 || col_norm == 0.0) continue;
      int exponent = 0;
      std::frexp(row_norm / col_norm, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double scaled_col = std::ldexp(col_norm, exponent);
      const double scaled_row = std::ldexp(row_norm, -exponent);
      if (scaled_col + scaled_row < gamma * (col_norm + row_norm)) {
        changed = true;
        a.row(i) *= std::ldexp(1.0, -exponent);
        a.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
}

void check_multiplicities(std::span<const int> multiplicities) {
  if (multiplicities.empty()) throw InputError("no multiplicities given");
  for (int l : multiplicities) {
    if (l < 1) throw InputError("multiplicities must be positive");
  }
}

// Clusters the candidate nodes, fits magnitudes and fills the common report
// fields.
SolveReport finish_report(Method method, std::span<const Complex> roots,
                          std::span<const int> multiplicities,
                          const MeasurementVector& m, const SolverOptions& opts) {
  const RootClusters clusters =
      cluster_roots(roots, multiplicities, opts.cluster_tolerance);
  const MagnitudeFit fit = recover_magnitudes(clusters.nodes, multiplicities, m);
  SolveReport report;
  report.method = method;
  report.recovered.nodes = clusters.nodes;
  report.recovered.multiplicities.assign(multiplicities.begin(),
                                         multiplicities.end());
  report.recovered.magnitudes = fit.magnitudes;
  report.diagnostics["cluster_spread"] = clusters.max_spread;
  report.diagnostics["magnitude_residual"] = fit.residual;
  return report;
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::kProny: return "prony";
    case Method::kEsprit: return "esprit";
    case Method::kApm: return "apm";
    case Method::kLsq: return "lsq";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::kProny, Method::kEsprit, Method::kApm, Method::kLsq}) {
    if (name == method_name(m)) return m;
  }
  throw InputError("unknown method '" + name + "'");
}

std::vector<Complex> poly_roots(std::span<const Complex> coeffs) {
  std::size_t first = 0;
  while (first < coeffs.size() && coeffs[first] == Complex(0.0, 0.0)) ++first;
  if (first == coeffs.size()) throw InputError("zero polynomial has no roots");
  const auto p = coeffs.subspan(first);
  const int degree = static_cast<int>(p.size()) - 1;
  if (degree < 1) throw InputError("constant polynomial has no roots");

  ComplexMatrix companion = ComplexMatrix::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) {
    companion(i, degree - 1) = -p[degree - i] / p[0];
  }
  balance_companion(companion);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("companion eigenvalue iteration did not converge");
  }
  const ComplexVector& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

MagnitudeFit recover_magnitudes(std::span<const Complex> nodes,
                                std::span<const int> multiplicities,
                                const MeasurementVector& m) {
  check_multiplicities(multiplicities);
  const int C = total_multiplicity(multiplicities);
  if (m.size() < C) {
    throw InputError("magnitude recovery needs at least C = " +
                     std::to_string(C) + " measurements");
  }
  const int S = static_cast<int>(m.size());
  const ComplexMatrix u = confluent_vandermonde(nodes, multiplicities, S);
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(u);
  if (qr.rank() < C) {
    throw DegenerateInputError(
        "confluent Vandermonde system is rank deficient (coincident nodes)");
  }
  const ComplexVector a = qr.solve(m);
  MagnitudeFit fit;
  fit.residual = (u * a - m).norm();
  int p = 0;
  for (int l : multiplicities) {
    fit.magnitudes.emplace_back(a.data() + p, a.data() + p + l);
    p += l;
  }
  return fit;
}

SolveReport prony_solve(const MeasurementVector& m,
                        std::span<const int> multiplicities,
                        const SolverOptions& opts) {
  check_multiplicities(multiplicities);
  const int C = total_multiplicity(multiplicities);
  const int S = static_cast<int>(m.size());
  if (S < 2 * C) {
    throw InputError("Prony method needs S >= 2C = " + std::to_string(2 * C) +
                     " measurements, got " + std::to_string(S));
  }
  const int rows = opts.hankel_rows.value_or(S - C);
  const HankelSystem system = hankel_system(m, C, rows);

  ComplexVector q;
  if (rows == C) {
    Eigen::FullPivLU<ComplexMatrix> lu(system.matrix);
    if (!lu.isInvertible()) {
      throw SingularMatrixError(
          "Hankel system is singular: no unique solution (coincident nodes "
          "or vanishing highest magnitude)");
    }
    q = lu.solve(system.rhs);
  } else {
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(system.matrix);
    if (qr.rank() < C) {
      throw SingularMatrixError(
          "Hankel system is rank deficient: no unique solution (coincident "
          "nodes or vanishing highest magnitude)");
    }
    q = qr.solve(system.rhs);
  }

  std::vector<Complex> coeffs(C + 1);
  coeffs[0] = 1.0;
  for (int j = 0; j < C; ++j) coeffs[C - j] = q(j);
  const std::vector<Complex> roots = poly_roots(coeffs);

  SolveReport report = finish_report(Method::kProny, roots, multiplicities, m, opts);
  double kappa = kInf;
  try {
    kappa = condition_number(system.matrix.topRows(C));
  } catch (const SingularMatrixError&) {
  }
  report.diagnostics["hankel_condition_inf"] = kappa;
  report.diagnostics["q_residual"] = (system.matrix * q - system.rhs).norm();
  report.diagnostics["hankel_rows"] = rows;
  return report;
}

std::vector<Complex> rotational_eigenvalues(const ComplexMatrix& basis) {
  if (basis.rows() < basis.cols() + 1) {
    throw InputError("rotational invariance needs more rows than columns");
  }
  const Eigen::Index r = basis.rows() - 1;
  const ComplexMatrix down = basis.topRows(r);
  const ComplexMatrix up = basis.bottomRows(r);
  const ComplexMatrix phi = down.completeOrthogonalDecomposition().solve(up);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(phi, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue iteration for Phi did not converge");
  }
  const ComplexVector& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::pair<int, int> esprit_hankel_shape(int S, int C, const SolverOptions& opts) {
  if (opts.esprit_shape == EspritShape::kCustom) {
    const int rows = opts.esprit_rows, cols = opts.esprit_cols;
    if (rows < C + 1 || cols < C || rows + cols - 1 > S) {
      throw InputError("ESPRIT Hankel shape " + std::to_string(rows) + "x" +
                       std::to_string(cols) + " is inadmissible for S = " +
                       std::to_string(S) + ", C = " + std::to_string(C));
    }
    return {rows, cols};
  }
  // Need rows >= C + 1 for the shifted bases and cols >= C for rank C.
  const int lo = C + 1;
  const int hi = S + 1 - C;
  if (lo > hi) {
    throw InputError("ESPRIT needs S >= 2C = " + std::to_string(2 * C) +
                     " measurements, got " + std::to_string(S));
  }
  const double preferred = opts.esprit_shape == EspritShape::kRowsTwiceCols
                               ? 2.0 * (S + 1) / 3.0
                               : (S + 1) / 3.0;
  const int rows = std::clamp(static_cast<int>(std::lround(preferred)), lo, hi);
  return {rows, S + 1 - rows};
}

SolveReport esprit_solve(const MeasurementVector& m,
                         std::span<const int> multiplicities,
                         const SolverOptions& opts) {
  check_multiplicities(multiplicities);
  const int C = total_multiplicity(multiplicities);
  const int S = static_cast<int>(m.size());
  const auto [rows, cols] = esprit_hankel_shape(S, C, opts);
  const ComplexMatrix h = hankel_matrix(m, rows, cols);

  Eigen::JacobiSVD<ComplexMatrix> svd(h, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double rank_floor =
      sv(0) * std::numeric_limits<double>::epsilon() * std::max(rows, cols);
  if (sv(0) == 0.0 || sv(C - 1) <= rank_floor) {
    throw SingularMatrixError("Hankel matrix has numerical rank below C = " +
                              std::to_string(C));
  }
  const ComplexMatrix w = svd.matrixU().leftCols(C);
  const std::vector<Complex> eigenvalues = rotational_eigenvalues(w);

  SolveReport report =
      finish_report(Method::kEsprit, eigenvalues, multiplicities, m, opts);
  report.diagnostics["hankel_rows"] = rows;
  report.diagnostics["hankel_cols"] = cols;
  report.diagnostics["signal_singular_value_min"] = sv(C - 1);
  report.diagnostics["singular_value_gap"] =
      C < sv.size() ? (sv(C) > 0.0 ? sv(C - 1) / sv(C) : kInf) : kInf;
  return report;
}

ApmNodes apm_nodes(const MeasurementVector& m, int L) {
  const int S = static_cast<int>(m.size());
  if (L < 1) throw InputError("APM needs L >= 1");
  if (S < 2 * L) {
    throw InputError("APM with L = " + std::to_string(L) + " needs S >= " +
                     std::to_string(2 * L) + " measurements, got " +
                     std::to_string(S));
  }
  const ComplexMatrix h = hankel_matrix(m, S - L, L + 1);
  Eigen::JacobiSVD<ComplexMatrix> svd(h, Eigen::ComputeFullV);
  if (svd.singularValues()(0) == 0.0) {
    throw DegenerateInputError("APM Hankel matrix is zero");
  }
  const ComplexVector v = svd.matrixV().col(L);
  std::vector<Complex> coeffs(L + 1);
  for (int i = 0; i <= L; ++i) coeffs[L - i] = v(i);

  ApmNodes result;
  const Eigen::VectorXd& sv = svd.singularValues();
  result.smallest_singular_value = sv.size() == L + 1 ? sv(L) : 0.0;
  result.roots = poly_roots(coeffs);
  for (const Complex& z : result.roots) {
    result.unit_circle_distance.push_back(std::abs(std::abs(z) - 1.0));
  }
  return result;
}

SolveReport apm_solve(const MeasurementVector& m,
                      std::span<const int> multiplicities,
                      const SolverOptions& opts) {
  check_multiplicities(multiplicities);
  for (int l : multiplicities) {
    if (l != 1) {
      throw InputError(
          "unsupported configuration: APM handles simple nodes only");
    }
  }
  const int n = static_cast<int>(multiplicities.size());
  const ApmNodes nodes = apm_nodes(m, n);
  if (static_cast<int>(nodes.roots.size()) != n) {
    throw DegenerateInputError("APM polynomial lost degree");
  }
  SolveReport report =
      finish_report(Method::kApm, nodes.roots, multiplicities, m, opts);
  // Amplification of node errors into magnitude errors for 2N+1 = S samples.
  const double half_length = (static_cast<double>(m.size()) - 1.0) / 2.0;
  report.diagnostics["apm_magnitude_sensitivity"] =
      std::sqrt(std::max(half_length, 0.0) * n) * m.cwiseAbs().maxCoeff();
  report.diagnostics["smallest_singular_value"] = nodes.smallest_singular_value;
  return report;
}

SolveReport lsq_refine(const MeasurementVector& m, const ConfluentModel& initial,
                       const SolverOptions& opts) {
  check_model(initial);
  const int S = static_cast<int>(m.size());
  const int R = initial.num_params();
  if (S < R) {
    throw InputError("least squares needs S >= R = " + std::to_string(R) +
                     " measurements, got " + std::to_string(S));
  }
  if (const Criticality c = is_critical(initial); c.critical) {
    throw DegenerateInputError("initial guess is a critical point: " + c.reason);
  }
  const std::vector<int>& mult = initial.multiplicities;

  ParameterVector x = encode_params(initial);
  auto residual_at = [&](const ParameterVector& p) -> ComplexVector {
    return prony_map(decode_params(p, mult), S) - m;
  };
  ComplexVector r = residual_at(x);
  double cost = r.squaredNorm();
  const double initial_cost = cost;

  int iterations = 0;
  bool converged = false;
  double last_step = 0.0;
  for (; iterations < opts.max_lsq_iterations; ++iterations) {
    if (cost == 0.0) {
      converged = true;
      break;
    }
    const ComplexMatrix j = jacobian(decode_params(x, mult), S);
    // Realified system [Re J, -Im J; Im J, Re J] [dRe; dIm] = -[Re r; Im r].
    Eigen::MatrixXd jr(2 * S, 2 * R);
    jr << j.real(), -j.imag(), j.imag(), j.real();
    Eigen::VectorXd rr(2 * S);
    rr << r.real(), r.imag();
    const Eigen::VectorXd delta = jr.colPivHouseholderQr().solve(-rr);
    ParameterVector step(R);
    for (int p = 0; p < R; ++p) step(p) = Complex(delta(p), delta(R + p));
    last_step = step.cwiseAbs().maxCoeff();
    const double scale = 1.0 + x.cwiseAbs().maxCoeff();

    bool accepted = false;
    double t = 1.0;
    for (int halving = 0; halving <= 30; ++halving, t *= 0.5) {
      const ParameterVector trial = x + t * step;
      ComplexVector trial_r = residual_at(trial);
      const double trial_cost = trial_r.squaredNorm();
      if (trial_cost < cost) {
        x = trial;
        r = std::move(trial_r);
        cost = trial_cost;
        accepted = true;
        break;
      }
    }
    if (last_step <= opts.lsq_step_tolerance * scale) {
      converged = true;
      if (accepted) ++iterations;
      break;
    }
    if (!accepted) {
      // No descent along the Gauss-Newton direction. At the rounding floor
      // the step is tiny; a large rejected step means divergence.
      converged = last_step <= 1e-6 * scale;
      break;
    }
  }

  SolveReport report;
  report.method = Method::kLsq;
  report.recovered = decode_params(x, mult);
  report.diagnostics["iterations"] = iterations;
  report.diagnostics["residual"] = std::sqrt(cost);
  report.diagnostics["initial_residual"] = std::sqrt(initial_cost);
  report.diagnostics["last_step"] = last_step;
  report.diagnostics["converged"] = converged ? 1.0 : 0.0;
  return report;
}

}  // namespace prony
