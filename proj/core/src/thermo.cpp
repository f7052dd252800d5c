#include "qtm/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtm/errors.hpp"
#include "qtm/lindblad.hpp"

namespace qtm {

CurrentsReport CurrentsReport::to_figure_units(const MachineParams& p) const {
    const double scale = p.T[0] * p.gamma[0];
    CurrentsReport out = *this;
    for (std::size_t i = 0; i < kReservoirs; ++i) {
        out.Q[i] /= scale;
        out.W[i] /= scale;
        out.Q_exchange[i] /= scale;
        out.W_exchange[i] /= scale;
    }
    out.W_total /= scale;
    out.first_law_residual /= scale;
    out.Sdot_tot /= p.gamma[0];
    out.max_imag_residual /= scale;
    out.unit = unit * scale;
    return out;
}

CurrentsReport currents_report(const CMatrix& rho, const MachineParams& p, double steady_tol) {
    if (rho.rows() != kSystemDim || rho.cols() != kSystemDim) {
        throw ParameterError("currents_report: state must be 3x3");
    }
    const Couplings c = couplings(p);
    const Rates r = occupations_and_rates(p);

    const double residual = linalg::max_abs(build_liouvillian(c).apply(rho));
    if (residual > steady_tol) {
        std::ostringstream os;
        os << "currents_report: input is not steady (‖Lρ‖∞ = " << residual << " > "
           << steady_tol << ")";
        throw SolverError(SolverError::Kind::NotSteady, os.str());
    }

    CurrentsReport out;
    const Complex i_unit(0.0, 1.0);
    for (std::size_t i = 0; i < kReservoirs; ++i) {
        const auto [lo, hi] = transition(i);
        const double n = r.nbar[i];
        out.Q[i] = 2.0 * c.B[i] * p.gamma[i] *
                   (n * rho(lo, lo).real() - (1.0 + n) * rho(hi, hi).real());
        out.Q_exchange[i] = 2.0 * c.B[i] * p.gamma[i] *
                            (n * std::abs(rho(lo, lo).real()) + (1.0 + n) * std::abs(rho(hi, hi).real()));
        out.W_exchange[i] = 2.0 * c.B[i] * c.coupling[i] * c.lambda[i] * std::abs(rho(hi, lo));

        const Complex phase = std::polar(1.0, c.phi[i]);
        const Complex w = i_unit * c.B[i] * c.coupling[i] * c.lambda[i] *
                          (phase * rho(hi, lo) - std::conj(phase) * rho(lo, hi));
        out.W[i] = w.real();
        out.max_imag_residual = std::max(out.max_imag_residual, std::abs(w.imag()));
    }

    double residual_sum = 0.0;
    for (std::size_t i = 0; i < kReservoirs; ++i) {
        out.W_total += out.W[i];
        out.Sdot_tot -= out.Q[i] / p.T[i];
        residual_sum += out.Q[i] + out.W[i];
    }
    out.first_law_residual = residual_sum;
    return out;
}

CurrentsReport steady_currents(const MachineParams& p) {
    return currents_report(solve_ness(p), p);
}

} // namespace qtm
