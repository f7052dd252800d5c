#pragma once

#include <array>

#include "qtm/model.hpp"

namespace qtm {

// Steady-state currents. Positive heat/work flows into the machine.
struct CurrentsReport {
    std::array<double, kReservoirs> Q{};
    std::array<double, kReservoirs> W{};
    double W_total = 0.0;
    double Sdot_tot = 0.0;           // −Σ β_i Q_i
    double first_law_residual = 0.0; // Σ (Q_i + W_i)
    double unit = 1.0;               // energy·rate unit the numbers are expressed in
    double max_imag_residual = 0.0;  // largest discarded imaginary part of a work term

    // Gross one-way exchange behind each current: 2B_iγ_i(n̄_i ρ_lo + (1+n̄_i) ρ_hi)
    // for Q_i and 2B_i|g_i|λ_i|ρ_hi,lo| for W_i. A net current far below its
    // exchange is a cancellation and only known to roundoff.
    std::array<double, kReservoirs> Q_exchange{};
    std::array<double, kReservoirs> W_exchange{};

    // Copy expressed in units of T1·γ1. Sdot_tot is rescaled by γ1 only.
    [[nodiscard]] CurrentsReport to_figure_units(const MachineParams& p) const;
};

// Closed-form steady currents evaluated on the state entries:
//   Q_i = 2B_iγ_i(n̄_i ρ_lo,lo − (1 + n̄_i) ρ_hi,hi)
//   W_i = i B_i |g_i| λ_i (e^{iφ_i} ρ_hi,lo − e^{−iφ_i} ρ_lo,hi)
// Throws SolverError(NotSteady) unless ‖L ρ‖∞ ≤ steady_tol.
CurrentsReport currents_report(const CMatrix& rho, const MachineParams& p,
                               double steady_tol = 1e-10);

// solve_ness followed by currents_report, in natural units.
CurrentsReport steady_currents(const MachineParams& p);

} // namespace qtm
