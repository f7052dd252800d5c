#include "qtm/state.hpp"

#include <numeric>
#include <sstream>

#include "qtm/errors.hpp"

namespace qtm {

CMatrix hermitize(const CMatrix& rho) {
    return 0.5 * (rho + rho.adjoint());
}

CMatrix clip_to_psd(const CMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(rho));
    Eigen::VectorXd w = solver.eigenvalues().cwiseMax(0.0);
    const double total = w.sum();
    if (!(total > 0.0)) {
        throw SolverError(SolverError::Kind::NegativeState, "clip_to_psd: no positive weight");
    }
    w /= total;
    const CMatrix& v = solver.eigenvectors();
    return hermitize(v * w.cast<Complex>().asDiagonal() * v.adjoint());
}

void require_density_matrix(const CMatrix& rho, const std::string& what, double tol) {
    if (rho.rows() != rho.cols() || rho.size() == 0) {
        throw ParameterError(what + ": not a square matrix");
    }
    if (!rho.allFinite()) throw ParameterError(what + ": non-finite entries");
    if (linalg::max_abs(rho - rho.adjoint()) > tol) {
        throw ParameterError(what + ": not Hermitian");
    }
    if (std::abs(rho.trace() - 1.0) > tol) {
        std::ostringstream os;
        os << what << ": trace " << rho.trace().real() << " differs from 1";
        throw ParameterError(os.str());
    }
    const double min_eig = linalg::hermitian_eigenvalues(hermitize(rho)).minCoeff();
    if (min_eig < -tol) {
        std::ostringstream os;
        os << what << ": negative eigenvalue " << min_eig;
        throw ParameterError(os.str());
    }
}

CMatrix partial_trace(const CMatrix& joint, const std::vector<Eigen::Index>& dims,
                      std::size_t keep) {
    if (keep >= dims.size()) throw std::out_of_range("partial_trace: subsystem index");
    const Eigen::Index total =
        std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>());
    if (joint.rows() != total || joint.cols() != total) {
        throw std::invalid_argument("partial_trace: dimension mismatch");
    }

    Eigen::Index inner = 1; // product of dims after `keep`
    for (std::size_t k = keep + 1; k < dims.size(); ++k) inner *= dims[k];
    const Eigen::Index d = dims[keep];
    const Eigen::Index outer = total / (inner * d);

    CMatrix out = CMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < outer; ++a) {
        for (Eigen::Index c = 0; c < inner; ++c) {
            for (Eigen::Index i = 0; i < d; ++i) {
                for (Eigen::Index j = 0; j < d; ++j) {
                    out(i, j) += joint((a * d + i) * inner + c, (a * d + j) * inner + c);
                }
            }
        }
    }
    return out;
}

CMatrix reduce_to_system(const CMatrix& joint) {
    return partial_trace(joint, {3, 2, 2, 2}, 0);
}

CMatrix reduce_to_unit(const CMatrix& joint, std::size_t i) {
    if (i >= 3) throw std::out_of_range("reduce_to_unit: unit index must be 0, 1 or 2");
    return partial_trace(joint, {3, 2, 2, 2}, i + 1);
}

} // namespace qtm
