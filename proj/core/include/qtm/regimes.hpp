#pragma once

#include <array>
#include <optional>
#include <string>

#include "qtm/model.hpp"
#include "qtm/thermo.hpp"

namespace qtm {

enum class Regime { I, II, III, IV, V, VI, VII, VIII, Equilibrium, Unclassified };

// "I" … "VIII", "EQUILIBRIUM", "UNCLASSIFIED".
std::string to_string(Regime r);
// Inverse of to_string; throws std::invalid_argument on an unknown label.
Regime parse_regime(const std::string& label);

// Sign pattern (W, Q1, Q2, Q3) of a regime, each entry in {−1, 0, +1}. Only
// defined for I … VIII.
std::array<int, 4> sign_pattern(Regime r);

inline constexpr double kResolutionFloor = 1e-10;

// Table lookup on (sgn ΣW_i, sgn Q1, sgn Q2, sgn Q3). A current counts as zero
// when |x| < eps (units of the report: T1·γ1 after to_figure_units) or when
// |x| < rel_floor times its gross exchange, i.e. when the sign is not resolved
// by the steady-state solve. All zero → Equilibrium; patterns outside the
// table → Unclassified.
Regime classify(const CurrentsReport& c, double eps = 1e-9, double rel_floor = kResolutionFloor);

// The resolved signs (ΣW_i, Q1, Q2, Q3) that classify looks up.
std::array<int, 4> current_signs(const CurrentsReport& c, double eps = 1e-9,
                                 double rel_floor = kResolutionFloor);

// Closed-form steady state for thermal units (λ ignored).
struct ThermalBaseline {
    double rho11 = 0.0; // ground |0>
    double rho22 = 0.0; // |1>
    double rho33 = 0.0; // |2>
    double N = 0.0;
    double V_ss = 0.0;  // Q = (−B1, +B2, −B3)·V_ss

    [[nodiscard]] std::array<double, kReservoirs> heat_currents(const MachineParams& p) const;
};
ThermalBaseline thermal_baseline(const MachineParams& p);

// Steady currents of the thermal machine (all λ = 0) from the closed form, in
// natural units. The heat currents keep the exact ratios B1 : B2 : B3, which a
// numerical steady state only resolves to roundoff near equilibrium.
CurrentsReport thermal_currents(const MachineParams& p);

// Thermal regime from the sign of B1(β1 − β3) − B2(β2 − β3): I below zero, II
// above, Equilibrium at zero (relative tolerance rel_tol).
Regime thermal_regime(const MachineParams& p, double rel_tol = 1e-12);

// Value of the free spacing ("B1", "B2" or "B3") at which the thermal machine
// is at equilibrium, the other spacing held fixed ("B3" keeps B1 fixed).
// Empty when no positive solution exists.
std::optional<double> thermal_transition(const MachineParams& p, const std::string& free_spacing);

// Coherence amplitudes at which currents change sign with coherence only in
// reservoir i: λ*_i zeroes Q_j for j ≠ i, λ^NE_i zeroes Q_i. Each is empty
// when the closed-form radicand is negative or its denominator vanishes.
struct TransitionLambdas {
    std::optional<double> lambda_star;
    std::optional<double> lambda_ne;
};
TransitionLambdas transition_lambdas(const MachineParams& p, std::size_t i);

// Predicts W_3 < 0 (coherence in reservoir 3) from
//   β2 B3 < −β2 B1 + ln[(e^{β1B1}γ2(γ1 − γ3) + γ3(γ1 + γ2)) / (γ1(γ2 + γ3))].
// A non-positive logarithm argument yields false.
bool regime_VI_work_condition(const MachineParams& p);

} // namespace qtm
