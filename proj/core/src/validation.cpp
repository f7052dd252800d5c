#include "qtm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "qtm/collision.hpp"
#include "qtm/efficiency.hpp"
#include "qtm/lindblad.hpp"
#include "qtm/regimes.hpp"
#include "qtm/state.hpp"
#include "qtm/thermo.hpp"

namespace qtm {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

void run(std::vector<Check>& out, const std::string& name,
         const std::function<std::pair<bool, std::string>()>& body) {
    Check c;
    c.name = name;
    try {
        std::tie(c.passed, c.detail) = body();
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = std::string("error: ") + e.what();
    }
    out.push_back(std::move(c));
}

std::pair<bool, std::string> bound(double value, double limit, const std::string& what) {
    return {value <= limit, what + " = " + fmt(value) + " (limit " + fmt(limit) + ")"};
}

std::pair<bool, std::string> skipped(const std::string& why) {
    return {true, "skipped: " + why};
}

std::size_t coherent_count(const MachineParams& p) {
    return static_cast<std::size_t>(
        std::count_if(p.lambda.begin(), p.lambda.end(), [](double l) { return l > 0.0; }));
}

} // namespace

std::vector<Check> run_validation_suite(const MachineParams& p) {
    validate(p);
    std::vector<Check> out;

    run(out, "hamiltonians_hermitian_and_resonant", [&] {
        const Hamiltonians h = hamiltonians(p);
        double worst = linalg::max_abs(h.total - h.total.adjoint());
        worst = std::max(worst, linalg::max_abs(h.total * h.free - h.free * h.total) /
                                    std::max(1.0, linalg::max_abs(h.total)));
        return bound(worst, 1e-12, "max Hermiticity/commutator defect");
    });

    run(out, "liouvillian_trace_preserving", [&] {
        const CMatrix l = build_liouvillian(p).matrix;
        const CRowVector id = linalg::vec(CMatrix::Identity(kSystemDim, kSystemDim)).transpose();
        return bound(linalg::max_abs(id * l), 1e-12 * linalg::max_abs(l), "‖vec(I)†L‖∞");
    });

    run(out, "liouvillian_hermiticity_preserving", [&] {
        const Superoperator l = build_liouvillian(p);
        CMatrix a(kSystemDim, kSystemDim);
        a << 0.5, Complex(0.1, 0.2), Complex(-0.3, 0.05), Complex(0.1, -0.2), 0.3,
            Complex(0.0, 0.4), Complex(-0.3, -0.05), Complex(0.0, -0.4), 0.2;
        const CMatrix image = l.apply(a);
        return bound(linalg::max_abs(image - image.adjoint()), 1e-12 * linalg::max_abs(l.matrix),
                     "‖L(ρ) − L(ρ)†‖∞");
    });

    CMatrix ness;
    run(out, "ness_residual_and_positivity", [&] {
        ness = solve_ness(p);
        const double residual = linalg::max_abs(build_liouvillian(p).apply(ness));
        const double min_eig = linalg::hermitian_eigenvalues(ness).minCoeff();
        const bool ok = residual <= 1e-10 && min_eig >= 0.0 &&
                        std::abs(ness.trace() - 1.0) <= 1e-12;
        return std::pair{ok, "residual " + fmt(residual) + ", min eigenvalue " + fmt(min_eig)};
    });

    run(out, "first_and_second_law", [&] {
        const CurrentsReport c = steady_currents(p).to_figure_units(p);
        const bool ok = std::abs(c.first_law_residual) <= 1e-10 && c.Sdot_tot >= -1e-10;
        return std::pair{ok, "Σ(Q+W) = " + fmt(c.first_law_residual) + ", Ṡ = " + fmt(c.Sdot_tot)};
    });

    run(out, "thermal_closed_form", [&] {
        MachineParams q = p;
        q.lambda = {0.0, 0.0, 0.0};
        const CMatrix rho = solve_ness(q);
        const ThermalBaseline b = thermal_baseline(q);
        CMatrix expected = CMatrix::Zero(kSystemDim, kSystemDim);
        expected.diagonal() << b.rho11, b.rho22, b.rho33;
        const double state_err = linalg::max_abs(rho - expected);

        const CurrentsReport c = currents_report(rho, q);
        const auto thermal_q = b.heat_currents(q);
        double current_err = 0.0;
        const double scale = std::max({std::abs(thermal_q[0]), std::abs(thermal_q[1]),
                                       std::abs(thermal_q[2]), 1e-300});
        for (std::size_t i = 0; i < kReservoirs; ++i) {
            current_err = std::max(current_err, std::abs(c.Q[i] - thermal_q[i]) / scale);
        }
        const bool ok = state_err <= 1e-10 && current_err <= 1e-10;
        return std::pair{ok, "state error " + fmt(state_err) + ", current error " + fmt(current_err)};
    });

    run(out, "transition_amplitudes", [&] {
        if (coherent_count(p) == 0) return skipped("no coherent reservoir");
        double worst = 0.0;
        std::size_t tested = 0;
        for (std::size_t i = 0; i < kReservoirs; ++i) {
            if (p.lambda[i] == 0.0) continue;
            MachineParams q = p;
            q.lambda = {0.0, 0.0, 0.0};
            const TransitionLambdas t = transition_lambdas(q, i);
            const double scale = q.T[0] * q.gamma[0];
            if (t.lambda_star) {
                q.lambda[i] = *t.lambda_star;
                const CurrentsReport c = steady_currents(q);
                for (std::size_t j = 0; j < kReservoirs; ++j) {
                    if (j != i) worst = std::max(worst, std::abs(c.Q[j]) / scale);
                }
                ++tested;
            }
            if (t.lambda_ne) {
                q.lambda[i] = *t.lambda_ne;
                worst = std::max(worst, std::abs(steady_currents(q).Q[i]) / scale);
                ++tested;
            }
        }
        if (tested == 0) return skipped("no transition amplitude exists at these parameters");
        return bound(worst, 1e-8, "largest current at an analytic zero (T1·γ1)");
    });

    run(out, "collision_bookkeeping", [&] {
        const CollisionModel model(p);
        const CollisionRecord r = model.collide(ness.size() ? ness : solve_ness(p));
        double eq23 = 0.0;
        double relent = 0.0;
        for (std::size_t i = 0; i < kReservoirs; ++i) {
            eq23 = std::min(eq23, r.dC[i] + r.W[i] / p.T[i]);
            relent = std::min(relent, r.relent[i]);
        }
        const bool ok = std::abs(r.W_mec) <= 1e-12 && r.S_tot >= -1e-11 && relent >= -1e-12 &&
                        eq23 >= -1e-10;
        return std::pair{ok, "W_mec " + fmt(r.W_mec) + ", S_tot " + fmt(r.S_tot) +
                                 ", min relent " + fmt(relent) + ", min ΔC+βW " + fmt(eq23)};
    });

    run(out, "collisional_generator_convergence", [&] {
        const GeneratorConvergence g = generator_convergence(p);
        return std::pair{g.linear_regime, "halving ratio " + fmt(g.ratio) + " at tau " + fmt(p.tau)};
    });

    run(out, "phase_gauge_invariance", [&] {
        if (coherent_count(p) != 1) return skipped("needs exactly one coherent reservoir");
        const std::size_t i = static_cast<std::size_t>(
            std::find_if(p.lambda.begin(), p.lambda.end(), [](double l) { return l > 0.0; }) -
            p.lambda.begin());
        const CurrentsReport ref = steady_currents(p).to_figure_units(p);
        double worst = 0.0;
        for (double phi : {0.0, std::numbers::pi / 3.0, 4.0 * std::numbers::pi / 5.0}) {
            MachineParams q = p;
            q.phi[i] = phi;
            const CurrentsReport c = steady_currents(q).to_figure_units(q);
            for (std::size_t k = 0; k < kReservoirs; ++k) {
                worst = std::max({worst, std::abs(c.Q[k] - ref.Q[k]), std::abs(c.W[k] - ref.W[k])});
            }
        }
        return bound(worst, 1e-9, "largest current change under phase shifts (T1·γ1)");
    });

    run(out, "efficiency_equivalence", [&] {
        const CurrentsReport c = steady_currents(p).to_figure_units(p);
        const Regime r = classify(c);
        const EfficiencyReport e = regime_efficiency(c, r, p.T, 1e-9);
        if (!e.eta) return skipped("no efficiency defined in regime " + to_string(r));
        const auto generic = generic_efficiency(c, p.T, e.T_r);
        if (!generic) return std::pair{false, std::string("generic efficiency undefined")};
        const double diff = std::abs(*e.eta - *generic);
        const bool ok = diff <= 1e-12 && *e.eta >= 0.0 && *e.eta <= 1.0 + 1e-10;
        return std::pair{ok, "regime " + to_string(r) + ": eta " + fmt(*e.eta) +
                                 ", |specific − generic| " + fmt(diff)};
    });

    return out;
}

bool all_passed(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

} // namespace qtm
