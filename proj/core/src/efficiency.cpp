#include "qtm/efficiency.hpp"

#include <cmath>
#include <stdexcept>

namespace qtm {

namespace {

double plus(double x) { return 0.5 * (x + std::abs(x)); }
double minus(double x) { return 0.5 * (x - std::abs(x)); }

} // namespace

std::optional<double> EfficiencyReport::component(const std::string& name) const {
    for (const auto& [key, value] : components) {
        if (key == name) return value;
    }
    return std::nullopt;
}

std::optional<double> generic_efficiency(const CurrentsReport& c, const Temperatures& T,
                                         double T_r) {
    double output = 0.0;
    double input = 0.0;
    for (std::size_t a = 0; a < kReservoirs; ++a) {
        output -= minus(c.W[a]);
        input += plus(c.W[a]);
        const double weighted = c.Q[a] * (T_r / T[a] - 1.0);
        output += plus(weighted);
        input -= minus(weighted);
    }
    if (!(input > 0.0)) return std::nullopt;
    return output / input;
}

std::optional<double> reference_temperature(Regime r, const Temperatures& T) {
    switch (r) {
    case Regime::I:
    case Regime::III:
    case Regime::V: return T[1];
    case Regime::II:
    case Regime::IV:
    case Regime::VI: return T[0];
    default: return std::nullopt;
    }
}

EfficiencyReport regime_efficiency(const CurrentsReport& c, Regime r, const Temperatures& T,
                                   double eps) {
    EfficiencyReport out;
    out.regime = r;
    const auto tr = reference_temperature(r, T);
    if (!tr) return out;

    const Regime observed = classify(c, eps);
    if (observed != r) {
        throw std::invalid_argument("regime_efficiency: currents have the sign pattern of " +
                                    to_string(observed) + ", not " + to_string(r));
    }
    out.T_r = *tr;

    const double T1 = T[0], T2 = T[1], T3 = T[2];
    const double Q1 = c.Q[0], Q2 = c.Q[1], Q3 = c.Q[2], W = c.W_total;

    switch (r) {
    case Regime::I:
    case Regime::III: {
        const double eps_ar = T1 * (T3 - T2) / (T3 * (T2 - T1));
        const double eps_r = T1 / (T2 - T1);
        out.carnot = {{"eps_AR_max", eps_ar}, {"eps_R_max", eps_r}};
        out.eta = Q1 / (eps_ar * Q3 + eps_r * W);
        break;
    }
    case Regime::II:
    case Regime::IV: {
        const double eta_ap = T3 * (T2 - T1) / (T2 * (T3 - T1));
        const double eta_p = T3 / (T3 - T1);
        out.carnot = {{"eta_AP_max", eta_ap}, {"eta_P_max", eta_p}};
        out.eta = -Q3 / (eta_ap * Q2 + eta_p * W);
        break;
    }
    case Regime::V: {
        const double eps_r = T1 / (T2 - T1);
        const double eta_p_max = T3 / (T3 - T2);
        const double y = Q1 * (T2 / T1 - 1.0) + Q3 * (T2 / T3 - 1.0);
        const double eta_r = Q1 / (eps_r * W);
        const double eta_p = -Q3 / (eta_p_max * W);
        out.carnot = {{"eps_R_max", eps_r}, {"eta_P_max", eta_p_max}};
        out.components = {{"eta_R", eta_r}, {"eta_P", eta_p}};
        out.Y_output = y;
        out.eta = y / W;
        break;
    }
    case Regime::VI: {
        const double eta_c = 1.0 - T1 / T2;
        const double eta_ap_max = T3 * (T2 - T1) / (T2 * (T3 - T1));
        const double y = -W + Q3 * (T1 / T3 - 1.0);
        const double eta_e = -W / (eta_c * Q2);
        const double eta_ap = -Q3 / (eta_ap_max * Q2);
        out.carnot = {{"eta_C", eta_c}, {"eta_AP_max", eta_ap_max}};
        out.components = {{"eta_E", eta_e}, {"eta_AP", eta_ap}};
        out.Y_output = y;
        out.eta = y / (Q2 * eta_c);
        break;
    }
    default: break;
    }
    return out;
}

} // namespace qtm
