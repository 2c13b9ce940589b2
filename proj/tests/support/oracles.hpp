#pragma once

#include <complex>
#include <vector>

#include "prony/model.hpp"

// Reference implementations written independently of the library's code
// paths: term-by-term sums with std::pow, entrywise Jacobians, and plain
// Gaussian elimination.
namespace oracle {

using cd = std::complex<double>;
using Mat = std::vector<std::vector<cd>>;

double falling(int k, int j);

std::vector<cd> moments(const prony::ConfluentModel& model, int S);

/// Entrywise derivative formulas, columns in ParameterVector order.
Mat jacobian(const prony::ConfluentModel& model, int rows);

cd determinant(Mat a);
Mat inverse(Mat a);
Mat multiply(const Mat& a, const Mat& b);

double max_abs_diff(const Mat& a, const Mat& b);

/// eps times l1 norms of the rows of the inverse of jacobian(model, R).
std::vector<double> acc_loc(const prony::ConfluentModel& model, double eps);

Mat from_eigen(const prony::ComplexMatrix& a);

}  // namespace oracle
