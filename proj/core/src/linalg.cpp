#include "qtm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qtm/errors.hpp"

namespace qtm::linalg {

namespace {

double one_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

void require_square(const CMatrix& a, const char* what) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix is not square (" +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ")");
    }
}

CVector extended_residual(const CMatrix& a, const CVector& x, const CVector& b) {
    using Wide = std::complex<long double>;
    CVector r(b.size());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Wide sum(b(i));
        for (Eigen::Index j = 0; j < a.cols(); ++j) sum -= Wide(a(i, j)) * Wide(x(j));
        r(i) = Complex(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
    }
    return r;
}

} // namespace

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double max_abs(const CMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& a, double rel_tol) {
    if (a.rows() != a.cols()) return false;
    const double scale = max_abs(a);
    return max_abs(a - a.adjoint()) <= rel_tol * scale;
}

CMatrix matrix_exp(const CMatrix& a, double tol) {
    require_square(a, "matrix_exp");
    const Eigen::Index n = a.rows();
    if (n == 0) return a;

    // Scale so that ‖a/2^s‖₁ ≤ 1/2; the Taylor tail is then below machine
    // precision after ~20 terms.
    const double norm = one_norm(a);
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const CMatrix scaled = a / std::ldexp(1.0, squarings);

    CMatrix result = CMatrix::Identity(n, n);
    CMatrix term = CMatrix::Identity(n, n);
    const double stop = std::min(tol, 1e-17) * std::ldexp(1.0, -squarings);
    for (int k = 1; k <= 40; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        result += term;
        if (one_norm(term) <= stop * std::max(1.0, one_norm(result))) break;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& a) {
    require_square(a, "hermitian_eigenvalues");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

CMatrix matrix_log_psd(const CMatrix& a, double eigen_floor) {
    require_square(a, "matrix_log_psd");
    if (!is_hermitian(a)) {
        throw std::invalid_argument("matrix_log_psd: input is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
    Eigen::VectorXd logs = solver.eigenvalues().unaryExpr(
        [eigen_floor](double v) { return std::log(std::max(v, eigen_floor)); });
    const CMatrix& v = solver.eigenvectors();
    return v * logs.cast<Complex>().asDiagonal() * v.adjoint();
}

CVector null_vector(const CMatrix& a, const CRowVector& constraint_row) {
    require_square(a, "null_vector");
    const Eigen::Index n = a.rows();
    if (constraint_row.size() != n) {
        throw std::invalid_argument("null_vector: constraint row has wrong length");
    }

    Eigen::FullPivLU<CMatrix> adjoint_lu(a.adjoint());
    adjoint_lu.setThreshold(1e-11);
    const Eigen::Index kernel_dim = n - adjoint_lu.rank();
    if (kernel_dim > 1) {
        throw SolverError(SolverError::Kind::DegenerateKernel,
                          "null_vector: kernel has dimension " + std::to_string(kernel_dim) +
                              " (disconnected dynamics, steady state not unique)");
    }

    Eigen::Index replaced = 0;
    if (kernel_dim == 1) {
        const CVector left = adjoint_lu.kernel().col(0);
        double best = -1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            // ties resolve to the lowest index
            if (std::abs(left(k)) > best * (1.0 + 1e-12)) {
                best = std::abs(left(k));
                replaced = k;
            }
        }
    }

    CMatrix system = a;
    system.row(replaced) = constraint_row;
    CVector rhs = CVector::Zero(n);
    rhs(replaced) = 1.0;

    Eigen::FullPivLU<CMatrix> lu(system);
    if (!lu.isInvertible()) {
        throw SolverError(SolverError::Kind::SingularSystem,
                          "null_vector: system is singular after row replacement "
                          "(degenerate parameters)");
    }
    CVector x = lu.solve(rhs);
    // Iterative refinement with residuals accumulated in extended precision:
    // restores relative accuracy of entries many orders below the largest one.
    for (int pass = 0; pass < 2; ++pass) x += lu.solve(extended_residual(system, x, rhs));

    const double scale =
        std::max(a.cwiseAbs().rowwise().sum().maxCoeff(), std::numeric_limits<double>::min());
    const double residual = (a * x).cwiseAbs().maxCoeff();
    if (residual > 1e-10 * scale) {
        throw SolverError(SolverError::Kind::ResidualTooLarge,
                          "null_vector: residual " + std::to_string(residual) +
                              " exceeds 1e-10·‖a‖ (matrix has no kernel)");
    }
    return x;
}

CVector vec(const CMatrix& m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Eigen::Index dim) {
    if (v.size() != dim * dim) {
        throw std::invalid_argument("unvec: vector length is not dim²");
    }
    return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

} // namespace qtm::linalg
