#include "qtm/csv.hpp"

#include <cmath>
#include <cstdio>

namespace qtm::csv {

namespace {

void header(std::ostream& out, const std::vector<std::string>& columns) {
    for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k];
    out << '\n';
}

const CurrentsReport& pick(const CurvePoint& p, bool natural) {
    return natural ? p.currents : p.scaled;
}

void currents(std::ostream& out, const CurvePoint& p, bool natural) {
    const CurrentsReport& c = pick(p, natural);
    for (double q : c.Q) out << ',' << (p.solved ? number(q) : "nan");
    for (double w : c.W) out << ',' << (p.solved ? number(w) : "nan");
}

void residuals(std::ostream& out, const CurvePoint& p, bool natural) {
    const CurrentsReport& c = pick(p, natural);
    out << ',' << (p.solved ? number(c.first_law_residual) : "nan") << ','
        << (p.solved ? number(c.Sdot_tot) : "nan");
}

} // namespace

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string number(const std::optional<double>& v) {
    return v ? number(*v) : std::string();
}

const std::vector<std::string>& diagram_columns() {
    static const std::vector<std::string> c{"B",      "lambda", "regime", "Qdot1",
                                            "Qdot2",  "Qdot3",  "Wdot1",  "Wdot2",
                                            "Wdot3",  "first_law_residual", "Sdot_tot"};
    return c;
}

const std::vector<std::string>& overlay_columns() {
    static const std::vector<std::string> c{"B", "lambda_star", "lambda_ne", "thermal_transition"};
    return c;
}

const std::vector<std::string>& curve_columns() {
    static const std::vector<std::string> c{
        "swept_value", "Qdot1", "Qdot2",  "Qdot3",  "Wdot1",    "Wdot2",     "Wdot3",
        "eta",         "eta_R", "eta_P",  "eta_E",  "eta_AP",   "Y_output",  "regime",
        "in_regime",   "first_law_residual", "Sdot_tot"};
    return c;
}

const std::vector<std::string>& collision_columns() {
    static const std::vector<std::string> c{
        "step",   "time",   "rho00",  "rho11",  "rho22",  "re_rho01", "im_rho01",
        "re_rho02", "im_rho02", "re_rho12", "im_rho12", "Q1", "Q2", "Q3", "W1", "W2", "W3",
        "cum_Q1", "cum_Q2", "cum_Q3", "cum_W1", "cum_W2", "cum_W3", "S_tot", "W_mec"};
    return c;
}

void write_diagram(std::ostream& out, const RegimeDiagram& d, bool natural_units) {
    header(out, diagram_columns());
    for (std::size_t row = 0; row < d.lambda_values.size(); ++row) {
        for (std::size_t col = 0; col < d.b_values.size(); ++col) {
            const CurvePoint& p = d.at(col, row);
            out << number(d.b_values[col]) << ',' << number(d.lambda_values[row]) << ','
                << to_string(p.regime);
            currents(out, p, natural_units);
            residuals(out, p, natural_units);
            out << '\n';
        }
    }
}

void write_overlay(std::ostream& out, const RegimeDiagram& d) {
    header(out, overlay_columns());
    for (std::size_t col = 0; col < d.b_values.size(); ++col) {
        out << number(d.b_values[col]) << ',' << number(d.overlays[col].lambda_star) << ','
            << number(d.overlays[col].lambda_ne) << ',' << number(d.thermal_transition) << '\n';
    }
}

void write_curve(std::ostream& out, const std::vector<CurvePoint>& curve, bool natural_units) {
    header(out, curve_columns());
    for (const CurvePoint& p : curve) {
        const EfficiencyReport& e = p.efficiency;
        out << number(p.swept.empty() ? std::nan("") : p.swept[0]);
        currents(out, p, natural_units);
        std::optional<double> y = e.Y_output;
        if (y && natural_units) y = *y * p.params.T[0] * p.params.gamma[0];
        out << ',' << number(e.eta) << ',' << number(e.component("eta_R")) << ','
            << number(e.component("eta_P")) << ',' << number(e.component("eta_E")) << ','
            << number(e.component("eta_AP")) << ',' << number(y) << ',' << to_string(p.regime)
            << ',' << (p.in_regime ? 1 : 0);
        residuals(out, p, natural_units);
        out << '\n';
    }
}

void write_collisions(std::ostream& out, const CollisionRun& run, double tau) {
    header(out, collision_columns());
    std::array<double, kReservoirs> cq{}, cw{};
    for (std::size_t k = 0; k < run.records.size(); ++k) {
        const CollisionRecord& r = run.records[k];
        const CMatrix& s = r.rho_after;
        out << k + 1 << ',' << number(tau * static_cast<double>(k + 1));
        for (int i = 0; i < 3; ++i) out << ',' << number(s(i, i).real());
        for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
            out << ',' << number(s(i, j).real()) << ',' << number(s(i, j).imag());
        }
        for (double q : r.Q) out << ',' << number(q);
        for (double w : r.W) out << ',' << number(w);
        for (std::size_t i = 0; i < kReservoirs; ++i) {
            cq[i] += r.Q[i];
            cw[i] += r.W[i];
        }
        for (double q : cq) out << ',' << number(q);
        for (double w : cw) out << ',' << number(w);
        out << ',' << number(r.S_tot) << ',' << number(r.W_mec) << '\n';
    }
}

} // namespace qtm::csv
