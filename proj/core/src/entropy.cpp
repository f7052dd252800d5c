#include "qtm/entropy.hpp"

#include <cmath>

#include "qtm/state.hpp"

namespace qtm {

double von_neumann_entropy(const CMatrix& rho) {
    const Eigen::VectorXd w = linalg::hermitian_eigenvalues(hermitize(rho));
    double s = 0.0;
    for (double p : w) {
        if (p > linalg::kEigenFloor) s -= p * std::log(p);
    }
    return s;
}

double relative_entropy(const CMatrix& rho, const CMatrix& sigma) {
    const CMatrix r = hermitize(rho);
    // Tr ρ ln ρ via eigenvalues keeps the 0·ln 0 convention exact.
    const double cross = (r * linalg::matrix_log_psd(hermitize(sigma))).trace().real();
    return -von_neumann_entropy(r) - cross;
}

CMatrix dephase(const CMatrix& rho) {
    return rho.diagonal().asDiagonal();
}

double coherence(const CMatrix& rho) {
    return von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho);
}

} // namespace qtm
