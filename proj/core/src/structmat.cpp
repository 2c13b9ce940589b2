#include "prony/structmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "prony/forward.hpp"

namespace prony {

namespace {

double binomial(int n, int k) {
  double result = 1.0;
  for (int t = 1; t <= k; ++t) result = result * (n - k + t) / t;
  return result;
}

Complex int_power(Complex base, int exponent) {
  Complex result(1.0, 0.0);
  for (int t = 0; t < exponent; ++t) result *= base;
  return result;
}

void check_lengths(std::span<const Complex> nodes,
                   std::span<const int> multiplicities) {
  if (nodes.empty()) throw InputError("no nodes given");
  if (nodes.size() != multiplicities.size()) {
    throw InputError("nodes and multiplicities differ in length");
  }
  for (int l : multiplicities) {
    if (l < 1) throw InputError("multiplicities must be positive");
  }
}

}  // namespace

ComplexMatrix confluent_vandermonde(std::span<const Complex> nodes,
                                    std::span<const int> multiplicities,
                                    int num_rows) {
  check_lengths(nodes, multiplicities);
  if (num_rows < 1) throw InputError("confluent Vandermonde needs rows >= 1");
  const int cols = total_multiplicity(multiplicities);
  ComplexMatrix u = ComplexMatrix::Zero(num_rows, cols);
  int col = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Complex xi = nodes[i];
    Complex power(1.0, 0.0);  // xi^k, accumulated down the rows
    std::vector<Complex> powers(num_rows);
    for (int k = 0; k < num_rows; ++k) {
      powers[k] = power;
      power *= xi;
    }
    for (int k = 0; k < num_rows; ++k) {
      double ff = 1.0;
      for (int j = 0; j < multiplicities[i] && j <= k; ++j) {
        u(k, col + j) = ff * powers[k - j];
        ff *= static_cast<double>(k - j);
      }
    }
    col += multiplicities[i];
  }
  return u;
}

Complex confluent_vandermonde_det(std::span<const Complex> nodes,
                                  std::span<const int> multiplicities) {
  check_lengths(nodes, multiplicities);
  Complex det(1.0, 0.0);
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      det *= int_power(nodes[j] - nodes[i], multiplicities[i] * multiplicities[j]);
    }
  }
  for (int l : multiplicities) {
    double factorial = 1.0;
    for (int nu = 1; nu < l; ++nu) {
      factorial *= nu;
      det *= factorial;
    }
  }
  return det;
}

ComplexMatrix magnitude_block_matrix(const ConfluentModel& model) {
  check_model(model);
  const int C = model.num_magnitudes();
  ComplexMatrix b = ComplexMatrix::Zero(C, C);
  int offset = 0;
  for (int i = 0; i < model.num_nodes(); ++i) {
    const int l = model.multiplicities[i];
    for (int r = 0; r < l; ++r) {
      for (int s = 0; r + s < l; ++s) {
        b(offset + r, offset + s) = binomial(r + s, r) * model.magnitudes[i][r + s];
      }
    }
    offset += l;
  }
  return b;
}

ComplexMatrix hankel_matrix(const MeasurementVector& m, int rows, int cols) {
  if (rows < 1 || cols < 1) throw InputError("Hankel dimensions must be positive");
  if (m.size() < rows + cols - 1) {
    throw InputError("need " + std::to_string(rows + cols - 1) +
                     " measurements for a " + std::to_string(rows) + "x" +
                     std::to_string(cols) + " Hankel matrix, got " +
                     std::to_string(m.size()));
  }
  ComplexMatrix h(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) h(i, j) = m(i + j);
  }
  return h;
}

HankelSystem hankel_system(const MeasurementVector& m, int C, int num_rows) {
  if (C < 1) throw InputError("Hankel system needs C >= 1");
  if (num_rows < C) throw InputError("Hankel system needs num_rows >= C");
  if (m.size() < num_rows + C) {
    throw InputError("short input: Hankel system with " +
                     std::to_string(num_rows) + " rows and C = " +
                     std::to_string(C) + " needs " +
                     std::to_string(num_rows + C) + " measurements, got " +
                     std::to_string(m.size()));
  }
  HankelSystem system;
  system.matrix = hankel_matrix(m, num_rows, C);
  system.rhs = -m.segment(C, num_rows);
  return system;
}

double factorization_residual(const ConfluentModel& model) {
  check_model(model);
  const int C = model.num_magnitudes();
  const MeasurementVector m = prony_map(model, 2 * C - 1);
  const ComplexMatrix mc = hankel_matrix(m, C, C);
  const ComplexMatrix u = confluent_vandermonde(model.nodes, model.multiplicities, C);
  const ComplexMatrix b = magnitude_block_matrix(model);
  const ComplexMatrix diff = mc - u * b * u.transpose();
  return infinity_norm(diff) / std::max(1.0, infinity_norm(mc));
}

double infinity_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

double condition_number(const ComplexMatrix& a, MatrixNorm norm) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InputError("condition number needs a nonempty square matrix");
  }
  switch (norm) {
    case MatrixNorm::kInfinity: {
      Eigen::FullPivLU<ComplexMatrix> lu(a);
      if (!lu.isInvertible()) throw SingularMatrixError("matrix is singular");
      return infinity_norm(a) * infinity_norm(lu.inverse());
    }
    case MatrixNorm::kSpectral: {
      Eigen::JacobiSVD<ComplexMatrix> svd(a);
      const auto& sv = svd.singularValues();
      const double smax = sv(0);
      const double smin = sv(sv.size() - 1);
      if (smin <= smax * std::numeric_limits<double>::epsilon() * a.rows()) {
        throw SingularMatrixError("matrix is singular");
      }
      return smax / smin;
    }
  }
  return std::numeric_limits<double>::infinity();
}

double gautschi_inverse_bound(std::span<const Complex> nodes) {
  if (nodes.empty()) throw InputError("no nodes given");
  const std::size_t n = nodes.size();
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = 1.0 + std::abs(nodes[i]);
    double inverse_gap_sum = 0.0;
    double product = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double gap = std::abs(nodes[i] - nodes[j]);
      if (gap == 0.0) throw DegenerateInputError("coincident nodes");
      inverse_gap_sum += 1.0 / gap;
      const double factor = (1.0 + std::abs(nodes[j])) / gap;
      product *= factor * factor;
    }
    const double bi = std::max(ri, 1.0 + 2.0 * ri * inverse_gap_sum);
    bound = std::max(bound, bi * product);
  }
  return bound;
}

void write_matrix_csv(std::ostream& out, const ComplexMatrix& a) {
  out << "i,j,re,im\n";
  char buf[96];
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%.17g\n",
                    static_cast<long>(i), static_cast<long>(j), a(i, j).real(),
                    a(i, j).imag());
      out << buf;
    }
  }
}

}  // namespace prony
