#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace prony {

using Complex = std::complex<double>;

/// Dense complex matrix used for every structured object in the library
/// (confluent Vandermonde, Hankel, magnitude blocks, Jacobians).
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Moments m_0 ... m_{S-1}.
using MeasurementVector = Eigen::VectorXcd;

/// Flat parameter encoding, per node (a_{i,0}, ..., a_{i,l_i-1}, xi_i).
using ParameterVector = Eigen::VectorXcd;

/// Malformed or out-of-contract input (bad lengths, short measurement
/// vectors, unsupported configurations). Maps to CLI exit status 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that is well-formed but numerically impossible: singular
/// systems, critical points, rank deficiency. Maps to CLI exit status 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateInputError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Raised when roots cannot be grouped into the prescribed multiplicities.
/// Carries the best partition that was achieved (indices into the input).
class ClusteringError : public NumericalError {
 public:
  ClusteringError(const std::string& what, std::vector<std::vector<int>> groups)
      : NumericalError(what), groups_(std::move(groups)) {}
  const std::vector<std::vector<int>>& groups() const { return groups_; }

 private:
  std::vector<std::vector<int>> groups_;
};

}  // namespace prony
