#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtm/model.hpp"
#include "qtm/regimes.hpp"
#include "qtm/thermo.hpp"

namespace qtm {

using Temperatures = std::array<double, kReservoirs>;

// Free-energy based efficiency with reference temperature T_r:
//   η = [−Σ⁻W_α + Σ⁺Q_i(T_r/T_i − 1)] / [Σ⁺W_α − Σ⁻Q_i(T_r/T_i − 1)]
// with Σ±x = (x ± |x|)/2 applied term by term and per-reservoir W_α. Empty
// when the denominator (total input) is not positive.
std::optional<double> generic_efficiency(const CurrentsReport& c, const Temperatures& T,
                                         double T_r);

using NamedValues = std::vector<std::pair<std::string, double>>;

struct EfficiencyReport {
    Regime regime = Regime::Unclassified;
    std::optional<double> eta;
    double T_r = 0.0;               // 0 when no efficiency is defined
    NamedValues components;         // eta_R, eta_P (V); eta_E, eta_AP (VI)
    NamedValues carnot;             // Carnot factors entering the formula
    std::optional<double> Y_output; // combined output power (V and VI)

    [[nodiscard]] std::optional<double> component(const std::string& name) const;
};

// Regime-specific efficiency. W below is ΣW_α (only one reservoir carries
// coherence in every configuration studied here).
//   I, III   (T_r = T2): Q1 / (ε_AR Q3 + ε_R W)
//   II, IV   (T_r = T1): −Q3 / (η_AP Q2 + η_P W)
//   V        (T_r = T2): [Q1(T2/T1 − 1) + Q3(T2/T3 − 1)] / W = η_R + η_P
//   VI       (T_r = T1): [−W + Q3(T1/T3 − 1)] / [Q2(1 − T1/T2)] = η_E + η_AP
//   VII, VIII, EQUILIBRIUM, UNCLASSIFIED: not defined.
// Throws std::invalid_argument when the currents' sign pattern (zero threshold
// eps, in the units of c) does not match r.
EfficiencyReport regime_efficiency(const CurrentsReport& c, Regime r, const Temperatures& T,
                                   double eps = 0.0);

// Reference temperature the regime-specific formula is built on (T2 for I,
// III, V; T1 for II, IV, VI); empty otherwise.
std::optional<double> reference_temperature(Regime r, const Temperatures& T);

} // namespace qtm
