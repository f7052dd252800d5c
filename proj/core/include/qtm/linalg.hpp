#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qtm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;

namespace linalg {

inline constexpr double kExpTolerance = 1e-12;
inline constexpr double kEigenFloor = 1e-15;
inline constexpr double kHermitianTolerance = 1e-12;

// Kronecker product a ⊗ b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Largest absolute entry.
double max_abs(const CMatrix& a);

// max|A − A†| ≤ rel_tol · max|A| (zero matrix counts as Hermitian).
bool is_hermitian(const CMatrix& a, double rel_tol = kHermitianTolerance);

// exp(a) by scaling and squaring with a Taylor kernel. Throws
// std::invalid_argument for non-square input.
CMatrix matrix_exp(const CMatrix& a, double tol = kExpTolerance);

// Matrix logarithm of a Hermitian positive-semidefinite matrix. Eigenvalues
// below eigen_floor are clamped to eigen_floor before taking the log.
CMatrix matrix_log_psd(const CMatrix& a, double eigen_floor = kEigenFloor);

// Real eigenvalues (ascending) of a Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& a);

// Solves a·x = 0 with constraint_row·x = 1.
//
// The left null vector ℓ of a is found first; the row k with the largest |ℓ_k|
// is linearly dependent on the others and is replaced by constraint_row. For a
// trace-preserving generator ℓ is the vectorized identity and the replaced row
// is the first population equation.
//
// Throws SolverError:
//   DegenerateKernel  if a has a kernel of dimension > 1,
//   SingularSystem    if the row-replaced system is singular,
//   ResidualTooLarge  if ‖a·x‖∞ > 1e-10·‖a‖∞ (a has no kernel).
CVector null_vector(const CMatrix& a, const CRowVector& constraint_row);

// Column-stacking vectorization of a square matrix, and its inverse.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Eigen::Index dim);

} // namespace linalg
} // namespace qtm
