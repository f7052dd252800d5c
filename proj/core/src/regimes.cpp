#include "qtm/regimes.hpp"

#include <cmath>
#include <stdexcept>

namespace qtm {

namespace {

struct Row {
    Regime regime;
    std::array<int, 4> signs; // W, Q1, Q2, Q3
    const char* label;
};

constexpr std::array<Row, 8> kTable{{
    {Regime::I, {0, +1, -1, +1}, "I"},
    {Regime::II, {0, -1, +1, -1}, "II"},
    {Regime::III, {+1, +1, -1, +1}, "III"},
    {Regime::IV, {+1, -1, +1, -1}, "IV"},
    {Regime::V, {+1, +1, -1, -1}, "V"},
    {Regime::VI, {-1, -1, +1, -1}, "VI"},
    {Regime::VII, {+1, -1, -1, +1}, "VII"},
    {Regime::VIII, {+1, -1, -1, -1}, "VIII"},
}};

int sign(double x, double eps, double exchange = 0.0, double rel_floor = 0.0) {
    if (x == 0.0 || std::abs(x) < eps || std::abs(x) < rel_floor * exchange) return 0;
    return x > 0.0 ? 1 : -1;
}

std::optional<double> root_of_ratio(double numerator, double denominator) {
    if (denominator == 0.0 || !std::isfinite(numerator) || !std::isfinite(denominator)) {
        return std::nullopt;
    }
    const double square = numerator / denominator;
    if (!(square >= 0.0)) return std::nullopt;
    return std::sqrt(square);
}

} // namespace

std::string to_string(Regime r) {
    for (const auto& row : kTable) {
        if (row.regime == r) return row.label;
    }
    return r == Regime::Equilibrium ? "EQUILIBRIUM" : "UNCLASSIFIED";
}

Regime parse_regime(const std::string& label) {
    for (const auto& row : kTable) {
        if (label == row.label) return row.regime;
    }
    if (label == "EQUILIBRIUM") return Regime::Equilibrium;
    if (label == "UNCLASSIFIED") return Regime::Unclassified;
    throw std::invalid_argument("unknown regime label '" + label + "'");
}

std::array<int, 4> sign_pattern(Regime r) {
    for (const auto& row : kTable) {
        if (row.regime == r) return row.signs;
    }
    throw std::invalid_argument("regime " + to_string(r) + " has no sign pattern");
}

std::array<int, 4> current_signs(const CurrentsReport& c, double eps, double rel_floor) {
    const double w_exchange = c.W_exchange[0] + c.W_exchange[1] + c.W_exchange[2];
    return {sign(c.W_total, eps, w_exchange, rel_floor),
            sign(c.Q[0], eps, c.Q_exchange[0], rel_floor),
            sign(c.Q[1], eps, c.Q_exchange[1], rel_floor),
            sign(c.Q[2], eps, c.Q_exchange[2], rel_floor)};
}

Regime classify(const CurrentsReport& c, double eps, double rel_floor) {
    const std::array<int, 4> s = current_signs(c, eps, rel_floor);
    if (s == std::array<int, 4>{0, 0, 0, 0}) return Regime::Equilibrium;
    for (const auto& row : kTable) {
        if (row.signs == s) return row.regime;
    }
    return Regime::Unclassified;
}

std::array<double, kReservoirs> ThermalBaseline::heat_currents(const MachineParams& p) const {
    return {-p.B1 * V_ss, p.B2 * V_ss, -p.B3() * V_ss};
}

ThermalBaseline thermal_baseline(const MachineParams& p) {
    const Rates r = occupations_and_rates(p);
    const double n1 = r.nbar[0], n2 = r.nbar[1], n3 = r.nbar[2];
    const double g1 = p.gamma[0], g2 = p.gamma[1], g3 = p.gamma[2];

    ThermalBaseline b;
    b.N = g1 * g3 * (1 + 2 * n1 + n3 + 3 * n1 * n3) + g2 * g3 * (n2 + n3 + 3 * n2 * n3) +
          g1 * g2 * (1 + 2 * (n1 + n2) + 3 * n1 * n2);
    b.rho11 = (n3 * g2 * g3 * (1 + n2) + g1 * (1 + n1) * ((1 + n2) * g2 + (1 + n3) * g3)) / b.N;
    b.rho22 = (n1 * g1 * g2 * (1 + n2) + g3 * (1 + n3) * (n1 * g1 + n2 * g2)) / b.N;
    b.rho33 = (n2 * g1 * g2 * (1 + n1) + n3 * g3 * (n1 * g1 + n2 * g2)) / b.N;
    // n2(1 + n1 + n3) − n1n3 = n1n3(1 + n2)(e^Δ − 1), Δ = β1B1 + β3B3 − β2B2,
    // evaluated without the cancellation near the thermal transition.
    const double delta = p.beta(0) * p.B1 + p.beta(2) * p.B3() - p.beta(1) * p.B2;
    const double k = n1 * n3 * (1 + n2) * std::expm1(delta);
    b.V_ss = 2.0 * k * g1 * g2 * g3 / b.N;
    return b;
}

CurrentsReport thermal_currents(const MachineParams& p) {
    validate(p);
    const ThermalBaseline b = thermal_baseline(p);
    const Rates r = occupations_and_rates(p);
    const std::array<double, kReservoirs> population{b.rho11, b.rho22, b.rho33};
    const auto B = p.B();

    CurrentsReport out;
    out.Q = b.heat_currents(p);
    for (std::size_t i = 0; i < kReservoirs; ++i) {
        const auto [lo, hi] = transition(i);
        out.Q_exchange[i] = 2.0 * B[i] * p.gamma[i] *
                            (r.nbar[i] * population[lo] + (1.0 + r.nbar[i]) * population[hi]);
        out.Sdot_tot -= out.Q[i] / p.T[i];
        out.first_law_residual += out.Q[i];
    }
    return out;
}

Regime thermal_regime(const MachineParams& p, double rel_tol) {
    validate(p);
    const double lhs = p.B1 * (p.beta(0) - p.beta(2));
    const double rhs = p.B2 * (p.beta(1) - p.beta(2));
    if (std::abs(lhs - rhs) <= rel_tol * std::max(std::abs(lhs), std::abs(rhs))) {
        return Regime::Equilibrium;
    }
    return lhs < rhs ? Regime::I : Regime::II;
}

std::optional<double> thermal_transition(const MachineParams& p, const std::string& free_spacing) {
    const double b1 = p.beta(0), b2 = p.beta(1), b3 = p.beta(2);
    double value = 0.0;
    if (free_spacing == "B1") {
        value = p.B2 * (b2 - b3) / (b1 - b3);
    } else if (free_spacing == "B2") {
        value = p.B1 * (b1 - b3) / (b2 - b3);
    } else if (free_spacing == "B3") {
        value = p.B1 * (b1 - b2) / (b2 - b3);
    } else {
        throw std::invalid_argument("thermal_transition: free spacing must be B1, B2 or B3");
    }
    if (!std::isfinite(value) || value <= 0.0) return std::nullopt;
    return value;
}

TransitionLambdas transition_lambdas(const MachineParams& p, std::size_t i) {
    const Rates r = occupations_and_rates(p);
    const double n1 = r.nbar[0], n2 = r.nbar[1], n3 = r.nbar[2];
    const double g1 = p.gamma[0], g2 = p.gamma[1], g3 = p.gamma[2];
    const double k = -n1 * n3 + n2 * (1 + n1 + n3);
    const auto B = p.B();

    TransitionLambdas out;
    switch (i) {
    case 0: {
        const double s = (1 + 2 * n1) * g1 + n2 * g2 + n3 * g3;
        const double shared = k * (B[0] * B[0] + s * s);
        out.lambda_star = root_of_ratio(shared, 2 * (1 + 2 * n1) * (n3 - n2) * s);
        out.lambda_ne = root_of_ratio(
            g2 * g3 * shared, -2 * (1 + 2 * n1) * g1 * s * ((1 + n2) * g2 + (1 + n3) * g3));
        break;
    }
    case 1: {
        const double s = n1 * g1 + (1 + 2 * n2) * g2 + (1 + n3) * g3;
        const double shared = k * (B[1] * B[1] + s * s);
        out.lambda_star = root_of_ratio(shared, -2 * (1 + 2 * n2) * (1 + n1 + n3) * s);
        out.lambda_ne = root_of_ratio(g1 * g3 * shared,
                                      2 * (1 + 2 * n2) * g2 * ((1 + n1) * g1 + n3 * g3) * s);
        break;
    }
    case 2: {
        const double s = (1 + n1) * g1 + (1 + n2) * g2 + (1 + 2 * n3) * g3;
        const double shared = k * (B[2] * B[2] + s * s);
        out.lambda_star = root_of_ratio(shared, 2 * (n1 - n2) * (1 + 2 * n3) * s);
        out.lambda_ne = root_of_ratio(g1 * g2 * shared,
                                      -2 * (1 + 2 * n3) * (n1 * g1 + n2 * g2) * g3 * s);
        break;
    }
    default:
        throw std::out_of_range("transition_lambdas: reservoir index must be 0, 1 or 2");
    }
    return out;
}

bool regime_VI_work_condition(const MachineParams& p) {
    validate(p);
    const double g1 = p.gamma[0], g2 = p.gamma[1], g3 = p.gamma[2];
    const double argument =
        (std::exp(p.beta(0) * p.B1) * g2 * (g1 - g3) + g3 * (g1 + g2)) / (g1 * (g2 + g3));
    if (!(argument > 0.0)) return false;
    return p.beta(1) * p.B3() < -p.beta(1) * p.B1 + std::log(argument);
}

} // namespace qtm
