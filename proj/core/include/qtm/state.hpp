#pragma once

#include <string>
#include <vector>

#include "qtm/linalg.hpp"

namespace qtm {

// (ρ + ρ†)/2.
CMatrix hermitize(const CMatrix& rho);

// Sets negative eigenvalues to zero and renormalizes the trace to one.
CMatrix clip_to_psd(const CMatrix& rho);

// Throws ParameterError unless rho is square, Hermitian, unit trace (1e−10)
// and has no eigenvalue below −tol.
void require_density_matrix(const CMatrix& rho, const std::string& what, double tol = 1e-10);

// Partial trace of a state on ⊗_k C^{dims[k]} keeping subsystem `keep`.
CMatrix partial_trace(const CMatrix& joint, const std::vector<Eigen::Index>& dims,
                      std::size_t keep);

// Joint space system ⊗ unit1 ⊗ unit2 ⊗ unit3.
CMatrix reduce_to_system(const CMatrix& joint);
CMatrix reduce_to_unit(const CMatrix& joint, std::size_t i);

} // namespace qtm
