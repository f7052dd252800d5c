#include "qtm/collision.hpp"

#include <sstream>

#include "qtm/entropy.hpp"
#include "qtm/errors.hpp"
#include "qtm/state.hpp"

namespace qtm {

namespace {

double energy(const CMatrix& h, const CMatrix& rho) {
    return (h * rho).trace().real();
}

} // namespace

CollisionModel::CollisionModel(const MachineParams& p) : params_(p) {
    validate(p);
    h_ = hamiltonians(p);
    unitary_ = linalg::matrix_exp(Complex(0.0, -p.tau) * h_.total);
    for (std::size_t i = 0; i < kReservoirs; ++i) {
        units_[i] = reservoir_unit_state(p, i).rho;
        log_units_[i] = linalg::matrix_log_psd(units_[i]);
        unit_entropy_[i] = von_neumann_entropy(units_[i]);
        unit_coherence_[i] = coherence(units_[i]);
    }
    units_joint_ = linalg::kron(linalg::kron(units_[0], units_[1]), units_[2]);
}

CMatrix CollisionModel::joint_after(const CMatrix& rho_s) const {
    return unitary_ * linalg::kron(rho_s, units_joint_) * unitary_.adjoint();
}

CMatrix CollisionModel::step(const CMatrix& rho_s) const {
    return reduce_to_system(joint_after(rho_s));
}

CollisionRecord CollisionModel::collide(const CMatrix& rho_s) const {
    require_density_matrix(rho_s, "collide: system state");

    const CMatrix before = linalg::kron(rho_s, units_joint_);
    const CMatrix after = unitary_ * before * unitary_.adjoint();
    const CMatrix delta = after - before;

    CollisionRecord r;
    r.rho_before = rho_s;
    r.rho_after = hermitize(reduce_to_system(after));
    r.W_mec = energy(h_.free, delta);
    r.dE_S = energy(h_.system, r.rho_after - rho_s);
    r.dS_sys = von_neumann_entropy(r.rho_after) - von_neumann_entropy(rho_s);
    r.S_tot = r.dS_sys;

    for (std::size_t i = 0; i < kReservoirs; ++i) {
        const CMatrix unit = hermitize(reduce_to_unit(after, i));
        const CMatrix d_unit = unit - units_[i];
        r.unit_after[i] = unit;
        r.dE_R[i] = energy(h_.unit[i], d_unit);
        r.Q[i] = params_.T[i] * (d_unit * log_units_[i]).trace().real();
        r.W[i] = -r.dE_R[i] - r.Q[i];
        r.dS_R[i] = von_neumann_entropy(unit) - unit_entropy_[i];
        r.relent[i] = relative_entropy(unit, units_[i]);
        r.dC[i] = coherence(unit) - unit_coherence_[i];
        r.S_tot += r.dS_R[i] + r.relent[i];
    }
    return r;
}

Superoperator CollisionModel::channel() const {
    constexpr Eigen::Index n = kSystemDim * kSystemDim;
    Superoperator phi{CMatrix::Zero(n, n)};
    for (Eigen::Index k = 0; k < kSystemDim; ++k) {
        for (Eigen::Index j = 0; j < kSystemDim; ++j) {
            CMatrix unit = CMatrix::Zero(kSystemDim, kSystemDim);
            unit(j, k) = 1.0;
            phi.matrix.col(k * kSystemDim + j) = linalg::vec(step(unit));
        }
    }
    return phi;
}

CollisionRecord collide(const CMatrix& rho_s, const MachineParams& p) {
    return CollisionModel(p).collide(rho_s);
}

CollisionRun run_collisions(const CMatrix& rho0, const MachineParams& p, std::size_t n,
                            double steady_tol) {
    if (n == 0) throw ParameterError("run_collisions: n must be at least 1 (empty run)");
    const CollisionModel model(p);

    CollisionRun run;
    run.states.reserve(n + 1);
    run.records.reserve(n);
    run.states.push_back(rho0);

    CMatrix rho = rho0;
    for (std::size_t k = 0; k < n; ++k) {
        CollisionRecord rec = model.collide(rho);
        for (std::size_t i = 0; i < kReservoirs; ++i) {
            run.cumulative_Q[i] += rec.Q[i];
            run.cumulative_W[i] += rec.W[i];
        }
        const double change = linalg::max_abs(rec.rho_after - rho);
        rho = rec.rho_after;
        run.states.push_back(rho);
        run.records.push_back(std::move(rec));
        run.steps = k + 1;
        if (change <= steady_tol) {
            run.steady = true;
            break;
        }
    }
    return run;
}

Superoperator effective_generator(const CollisionModel& model) {
    Superoperator phi = model.channel();
    phi.matrix -= CMatrix::Identity(phi.matrix.rows(), phi.matrix.cols());
    phi.matrix /= model.params().tau;
    return phi;
}

Superoperator effective_generator(const MachineParams& p) {
    return effective_generator(CollisionModel(p));
}

CMatrix collisional_steady_state(const CollisionModel& model) {
    return steady_state(effective_generator(model));
}

GeneratorConvergence generator_convergence(const MachineParams& p) {
    const CMatrix lindblad = build_liouvillian(p).matrix;
    MachineParams half = p;
    half.tau = p.tau / 2.0;

    GeneratorConvergence g;
    g.tau = p.tau;
    g.discrepancy = linalg::max_abs(effective_generator(p).matrix - lindblad);
    g.half_discrepancy = linalg::max_abs(effective_generator(half).matrix - lindblad);
    g.ratio = g.discrepancy / g.half_discrepancy;
    g.linear_regime = g.ratio >= 1.8 && g.ratio <= 2.2;
    return g;
}

GeneratorConvergence require_linear_regime(const MachineParams& p) {
    GeneratorConvergence g = generator_convergence(p);
    if (!g.linear_regime) {
        std::ostringstream os;
        os << "collisional generator not in the linear regime at tau = " << p.tau
           << ": halving ratio " << g.ratio << " outside [1.8, 2.2]; reduce tau";
        throw SolverError(SolverError::Kind::NonlinearRegime, os.str());
    }
    return g;
}

} // namespace qtm
