#include "qtm/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtm/errors.hpp"
#include "qtm/state.hpp"

namespace qtm {

namespace {

constexpr Eigen::Index kVecDim = kSystemDim * kSystemDim;

CMatrix ket_bra(Eigen::Index row, Eigen::Index col) {
    CMatrix m = CMatrix::Zero(kSystemDim, kSystemDim);
    m(row, col) = 1.0;
    return m;
}

CRowVector trace_row() {
    return linalg::vec(CMatrix::Identity(kSystemDim, kSystemDim)).transpose();
}

[[noreturn]] void unstable(const std::string& why, double dt) {
    std::ostringstream os;
    os << "evolve: step-size instability (" << why << ") at dt = " << dt
       << "; reduce dt";
    throw SolverError(SolverError::Kind::StepInstability, os.str());
}

} // namespace

CMatrix Superoperator::apply(const CMatrix& rho) const {
    return linalg::unvec(matrix * linalg::vec(rho), rho.rows());
}

CMatrix left_right(const CMatrix& left, const CMatrix& right) {
    return linalg::kron(right.transpose(), left);
}

CMatrix commutator_superop(const CMatrix& h) {
    const CMatrix id = CMatrix::Identity(h.rows(), h.cols());
    return Complex(0.0, -1.0) * (left_right(h, id) - left_right(id, h));
}

CMatrix dissipator_superop(const CMatrix& jump, double rate) {
    const CMatrix id = CMatrix::Identity(jump.rows(), jump.cols());
    const CMatrix n = jump.adjoint() * jump;
    return rate * (left_right(jump, jump.adjoint()) - 0.5 * left_right(n, id) -
                   0.5 * left_right(id, n));
}

CMatrix effective_hamiltonian(const Couplings& c) {
    CMatrix h = system_hamiltonian(c.B[0], c.B[1]);
    for (std::size_t i = 0; i < kReservoirs; ++i) {
        const auto [lo, hi] = transition(i);
        const Complex amp = c.lambda[i] * c.coupling[i] * std::polar(1.0, c.phi[i]);
        h(lo, hi) += amp;
        h(hi, lo) += std::conj(amp);
    }
    return h;
}

Superoperator build_liouvillian(const Couplings& c) {
    Superoperator l{commutator_superop(effective_hamiltonian(c))};
    for (std::size_t i = 0; i < kReservoirs; ++i) {
        const auto [lo, hi] = transition(i);
        l.matrix += dissipator_superop(ket_bra(lo, hi), c.gamma_minus[i]);
        l.matrix += dissipator_superop(ket_bra(hi, lo), c.gamma_plus[i]);
    }
    return l;
}

Superoperator build_liouvillian(const MachineParams& p) {
    return build_liouvillian(couplings(p));
}

CMatrix steady_state(const Superoperator& generator) {
    if (generator.matrix.rows() != kVecDim || generator.matrix.cols() != kVecDim) {
        throw std::invalid_argument("steady_state: generator must be 9x9");
    }
    const CVector x = linalg::null_vector(generator.matrix, trace_row());
    CMatrix rho = hermitize(linalg::unvec(x, kSystemDim));

    const double min_eig = linalg::hermitian_eigenvalues(rho).minCoeff();
    if (min_eig < -1e-12) {
        std::ostringstream os;
        os << "steady_state: eigenvalue " << min_eig << " below -1e-12 (not a physical state)";
        throw SolverError(SolverError::Kind::NegativeState, os.str());
    }
    if (min_eig < 0.0) rho = clip_to_psd(rho);

    const double residual = linalg::max_abs(generator.apply(rho));
    if (residual > 1e-10) {
        std::ostringstream os;
        os << "steady_state: residual ‖Lρ‖∞ = " << residual << " exceeds 1e-10";
        throw SolverError(SolverError::Kind::ResidualTooLarge, os.str());
    }
    return rho;
}

CMatrix solve_ness(const MachineParams& p) {
    return steady_state(build_liouvillian(p));
}

Trajectory evolve(const CMatrix& rho0, const Superoperator& generator, double t_final,
                  double dt, std::size_t stride) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("evolve: dt must be positive");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
        throw ParameterError("evolve: t_final must be non-negative");
    }
    if (stride == 0) throw ParameterError("evolve: stride must be at least 1");
    if (rho0.rows() != kSystemDim || rho0.cols() != kSystemDim) {
        throw ParameterError("evolve: initial state must be 3x3");
    }
    require_density_matrix(rho0, "evolve: initial state");

    const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
    const double h = steps == 0 ? 0.0 : t_final / static_cast<double>(steps);

    const CMatrix hl = h * generator.matrix;
    const CMatrix hl2 = hl * hl;
    const CMatrix step = CMatrix::Identity(kVecDim, kVecDim) + hl + hl2 / 2.0 +
                         hl2 * hl / 6.0 + hl2 * hl2 / 24.0;

    Eigen::ComplexEigenSolver<CMatrix> spectrum(step, false);
    const double radius = spectrum.eigenvalues().cwiseAbs().maxCoeff();
    if (radius > 1.0 + 1e-12) unstable("step propagator has spectral radius > 1", h);

    Trajectory out;
    out.times.push_back(0.0);
    out.states.push_back(rho0);

    CVector v = linalg::vec(rho0);
    const Complex trace0 = rho0.trace();
    for (std::size_t k = 1; k <= steps; ++k) {
        v = step * v;
        if (k % stride == 0 || k == steps) {
            const CMatrix rho = linalg::unvec(v, kSystemDim);
            if (std::abs(rho.trace() - trace0) > 1e-10) unstable("trace drift", h);
            if (linalg::max_abs(rho - rho.adjoint()) > 1e-9) unstable("Hermiticity drift", h);
            if (linalg::max_abs(rho) > 1.0 + 1e-6) unstable("state entries exceed 1", h);
            out.times.push_back(h * static_cast<double>(k));
            out.states.push_back(rho);
        }
    }
    return out;
}

Trajectory evolve(const CMatrix& rho0, const MachineParams& p, double t_final, double dt,
                  std::size_t stride) {
    return evolve(rho0, build_liouvillian(p), t_final, dt, stride);
}

} // namespace qtm
