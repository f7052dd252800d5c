#pragma once

#include "qtm/linalg.hpp"

namespace qtm {

// Entropies in nats. Eigenvalues below linalg::kEigenFloor contribute nothing
// (0·ln 0 = 0).
double von_neumann_entropy(const CMatrix& rho);

// S(ρ‖σ) = Tr ρ(ln ρ − ln σ). Infinite support mismatch is not detected: ln σ
// is floored at linalg::kEigenFloor.
double relative_entropy(const CMatrix& rho, const CMatrix& sigma);

// Relative entropy of coherence in the computational basis: S(diag ρ) − S(ρ).
double coherence(const CMatrix& rho);

// Diagonal part of a matrix.
CMatrix dephase(const CMatrix& rho);

} // namespace qtm
