#pragma once

#include <iosfwd>
#include <span>

#include "prony/common.hpp"
#include "prony/model.hpp"

namespace prony {

/// Confluent Vandermonde matrix with `num_rows` rows. Row k is the
/// concatenation over nodes of [xi^k, k xi^{k-1}, ..., (k)_{l-1} xi^{k-l+1}];
/// entries whose derivative order exceeds k are zero.
ComplexMatrix confluent_vandermonde(std::span<const Complex> nodes,
                                    std::span<const int> multiplicities,
                                    int num_rows);

/// Closed-form determinant of the square confluent Vandermonde matrix:
/// prod_{i<j} (xi_j - xi_i)^{l_i l_j} * prod_mu prod_{nu<l_mu} nu!.
Complex confluent_vandermonde_det(std::span<const Complex> nodes,
                                  std::span<const int> multiplicities);

/// Block-diagonal B with l_i x l_i blocks, (B_i)_{r,s} = binom(r+s, r)
/// a_{i,r+s} on and above the main anti-diagonal, zero below it. Satisfies
/// M_C = U B U^T.
ComplexMatrix magnitude_block_matrix(const ConfluentModel& model);

/// Rectangular Hankel matrix H(i, j) = m_{i+j}.
ComplexMatrix hankel_matrix(const MeasurementVector& m, int rows, int cols);

struct HankelSystem {
  ComplexMatrix matrix;  // num_rows x C, entries m_{i+j}
  ComplexVector rhs;     // -m_{C+i}
};

/// The linear system for the monic annihilating polynomial. Square when
/// num_rows == C, least-squares otherwise.
HankelSystem hankel_system(const MeasurementVector& m, int C, int num_rows);

/// ||M_C - U B U^T||_inf / max(1, ||M_C||_inf) for the model's own moments.
double factorization_residual(const ConfluentModel& model);

enum class MatrixNorm { kInfinity, kSpectral };

double infinity_norm(const ComplexMatrix& a);

/// kappa(A) = ||A|| ||A^-1||. Throws SingularMatrixError when A is singular
/// to working precision.
double condition_number(const ComplexMatrix& a,
                        MatrixNorm norm = MatrixNorm::kInfinity);

/// Gautschi's upper bound on ||U^-1||_inf for simple (l_i = 1) nodes.
/// Throws DegenerateInputError for coincident nodes.
double gautschi_inverse_bound(std::span<const Complex> nodes);

/// Debug dump, one "i,j,re,im" row per entry.
void write_matrix_csv(std::ostream& out, const ComplexMatrix& a);

}  // namespace prony
