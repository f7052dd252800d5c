// Acceptance checks: one PASS/FAIL line per criterion, tolerances pinned here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "random_params.hpp"
#include "qtm/collision.hpp"
#include "qtm/efficiency.hpp"
#include "qtm/lindblad.hpp"
#include "qtm/regimes.hpp"
#include "qtm/sweep.hpp"
#include "qtm/thermo.hpp"

using namespace qtm;

namespace {

struct Criterion {
    std::string name;
    bool passed = true;
    std::vector<std::string> lines; // sub-checks

    void check(bool ok, const std::string& what) {
        passed = passed && ok;
        lines.push_back(std::string(ok ? "ok   " : "MISS ") + what);
    }
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Closed-form thermal steady state vs the generator null space, 50 random sets.
Criterion thermal_ness_closed_form() {
    constexpr double kTol = 1e-10;
    Criterion c{"thermal_ness_closed_form"};
    testing::ParamSampler s(101);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const MachineParams p = s.thermal();
        const ThermalBaseline b = thermal_baseline(p);
        CMatrix expected = CMatrix::Zero(3, 3);
        expected(0, 0) = b.rho11;
        expected(1, 1) = b.rho22;
        expected(2, 2) = b.rho33;
        worst = std::max(worst, linalg::max_abs(solve_ness(p) - expected));
    }
    c.check(worst <= kTol, fmt("50 random sets: max entrywise |Δρ| = %.2e (tol %.0e)", worst, kTol));
    return c;
}

// Q = (−B1, B2, −B3)·V_ss on the numerical NESS; currents vanish on the
// thermal transition.
Criterion thermal_current_structure() {
    constexpr double kRelTol = 1e-10;
    constexpr double kZeroTol = 1e-10; // units of T1·γ1
    Criterion c{"thermal_current_structure"};
    testing::ParamSampler s(102);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const MachineParams p = s.thermal();
        const CurrentsReport q = steady_currents(p);
        const auto expected = thermal_baseline(p).heat_currents(p);
        for (std::size_t i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(q.Q[i] - expected[i]) / std::abs(expected[i]));
        }
    }
    c.check(worst <= kRelTol,
            fmt("50 random sets: max relative deviation from (-B1, B2, -B3)·V_ss = %.2e (tol %.0e)",
                worst, kRelTol));

    double largest = 0.0;
    int transitions = 0;
    for (int k = 0; transitions < 50 && k < 1000; ++k) {
        MachineParams p = s.thermal();
        const auto b1 = thermal_transition(p, "B1");
        if (!b1 || *b1 >= p.B2) continue;
        p.B1 = *b1;
        ++transitions;
        const CurrentsReport q = steady_currents(p).to_figure_units(p);
        for (double x : q.Q) largest = std::max(largest, std::abs(x));
    }
    c.check(transitions == 50 && largest <= kZeroTol,
            fmt("%d points with B1/T1 - B2/T2 + B3/T3 = 0: max |Q_i| = %.2e T1·γ1 (tol %.0e)",
                transitions, largest, kZeroTol));
    return c;
}

// First and second law on 10⁴ random points, coherent ones included.
Criterion laws_of_thermodynamics() {
    constexpr double kTol = 1e-10;
    constexpr double kMaxSeconds = 60.0;
    Criterion c{"laws_of_thermodynamics"};
    const auto t0 = std::chrono::steady_clock::now();
    testing::ParamSampler s(103);
    double first = 0.0, second = 0.0;
    int coherent = 0;
    for (int k = 0; k < 10000; ++k) {
        const int kind = k % 4;
        const MachineParams p = kind == 0 ? s.thermal() : s.coherent(kind == 3);
        coherent += kind != 0;
        const CurrentsReport q = steady_currents(p).to_figure_units(p);
        first = std::max(first, std::abs(q.first_law_residual));
        second = std::min(second, q.Sdot_tot);
    }
    const double elapsed = seconds_since(t0);
    c.check(first <= kTol, fmt("max |Σ(Q+W)| = %.2e T1·γ1 (tol %.0e)", first, kTol));
    c.check(second >= -kTol, fmt("min entropy production = %.2e γ1 (tol -%.0e)", second, kTol));
    c.check(elapsed < kMaxSeconds,
            fmt("10000 points (%d coherent) in %.1f s (limit %.0f s)", coherent, elapsed, kMaxSeconds));
    return c;
}

// Collisional model at the fig2a point with λ1 = 0.4.
Criterion collisional_convergence() {
    constexpr double kRatioLo = 1.8, kRatioHi = 2.2;
    constexpr double kWmecTol = 1e-12, kStotTol = 1e-11, kCoherenceTol = 1e-10;
    Criterion c{"collisional_convergence"};
    MachineParams p = figure_preset("fig2a").base;
    p.lambda[0] = 0.4;

    const GeneratorConvergence g = generator_convergence(p);
    c.check(g.ratio >= kRatioLo && g.ratio <= kRatioHi,
            fmt("generator discrepancy %.3e -> %.3e when tau halves: ratio %.4f (in [1.8, 2.2])",
                g.discrepancy, g.half_discrepancy, g.ratio));

    // Errors carry an O(τ) term and a τ^{3/2} term from the λ√τ unit
    // coherence, so the linear rate is read on the finest halving.
    constexpr int kHalvings = 5;
    const CurrentsReport ref = steady_currents(p);
    std::vector<double> err;
    std::string per_tau;
    for (int k = 0; k <= kHalvings; ++k) {
        MachineParams q = p;
        q.tau = p.tau / (1 << k);
        const CollisionModel model(q);
        const CollisionRecord r = model.collide(collisional_steady_state(model));
        double e = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            e = std::max({e, std::abs(r.Q[i] / q.tau - ref.Q[i]), std::abs(r.W[i] / q.tau - ref.W[i])});
        }
        err.push_back(e);
        per_tau += fmt("%s%.4f", k ? ", " : "", e / q.tau);
    }
    const double rate_ratio = err[kHalvings - 1] / err[kHalvings];
    c.check(rate_ratio >= kRatioLo && rate_ratio <= kRatioHi,
            fmt("steady Q_i/tau, W_i/tau vs closed-form currents: error/tau = %s for tau = 1e-3 / 2^k, "
                "k = 0..%d; last halving ratio %.4f (in [1.8, 2.2])",
                per_tau.c_str(), kHalvings, rate_ratio));

    const CollisionModel model(p);
    double wmec = 0.0, stot = 0.0, dcw = 0.0;
    CMatrix rho = CMatrix::Identity(3, 3) / 3.0;
    std::vector<CMatrix> starts{rho, collisional_steady_state(model)};
    CMatrix ground = CMatrix::Zero(3, 3);
    ground(0, 0) = 1.0;
    starts.push_back(ground);
    std::size_t collisions = 0;
    for (const CMatrix& start : starts) {
        const CollisionRun run = run_collisions(start, p, 1000, 0.0);
        for (const auto& r : run.records) {
            ++collisions;
            wmec = std::max(wmec, std::abs(r.W_mec));
            stot = std::min(stot, r.S_tot);
            for (std::size_t i = 0; i < 3; ++i) dcw = std::min(dcw, r.dC[i] + p.beta(i) * r.W[i]);
        }
    }
    c.check(wmec <= kWmecTol, fmt("%zu collisions: max |W_mec| = %.2e (tol %.0e)", collisions, wmec, kWmecTol));
    c.check(stot >= -kStotTol, fmt("min per-collision S_tot = %.2e (tol -%.0e)", stot, kStotTol));
    c.check(dcw >= -kCoherenceTol,
            fmt("min per-collision ΔC_i + β_i W_i = %.2e (tol -%.0e)", dcw, kCoherenceTol));
    return c;
}

std::string labels(const std::vector<Regime>& v) {
    std::string out;
    for (Regime r : v) out += (out.empty() ? "" : ",") + to_string(r);
    return out;
}

// Regime diagrams at 400×400; cells are kept for the efficiency check.
Criterion regime_diagram_fidelity(std::vector<RegimeDiagram>& diagrams) {
    constexpr std::size_t kGrid = 400;
    Criterion c{"regime_diagram_fidelity"};
    const std::vector<std::pair<std::string, std::vector<Regime>>> expected{
        {"fig2a", {Regime::I, Regime::II, Regime::III, Regime::IV, Regime::VII}},
        {"fig2b", {Regime::I, Regime::II, Regime::III, Regime::IV, Regime::VIII}},
        {"fig2c", {Regime::V, Regime::VI}},
    };
    for (const auto& [id, want] : expected) {
        const auto t0 = std::chrono::steady_clock::now();
        diagrams.push_back(regime_diagram(diagram_spec(figure_preset(id), kGrid, kGrid)));
        const RegimeDiagram& d = diagrams.back();
        const BoundaryReport b = boundary_agreement(d);
        c.check(b.unexplained == 0 && b.missed_crossings == 0,
                fmt("%s %zux%zu: %zu flips, %zu unexplained (%zu eps threshold onsets at λ = 0), "
                    "%zu/%zu analytic crossings matched, %.1f s",
                    id.c_str(), kGrid, kGrid, b.flips, b.unexplained, b.threshold_onsets,
                    b.curve_crossings - b.missed_crossings, b.curve_crossings, seconds_since(t0)));
        for (const auto& detail : b.details) c.lines.push_back("       " + detail);

        std::vector<Regime> found;
        std::size_t boundary_cells = 0;
        for (Regime r : regime_inventory(d)) {
            if (r == Regime::Equilibrium || r == Regime::Unclassified) continue;
            found.push_back(r);
        }
        for (const auto& cell : d.cells) {
            boundary_cells += cell.regime == Regime::Equilibrium || cell.regime == Regime::Unclassified;
        }
        const bool ok = id == "fig2c"
                            ? std::includes(found.begin(), found.end(), want.begin(), want.end())
                            : found == want;
        c.check(ok, fmt("%s regimes {%s}, expected %s{%s} (%zu boundary cells EQUILIBRIUM/UNCLASSIFIED)",
                        id.c_str(), labels(found).c_str(), id == "fig2c" ? "superset of " : "",
                        labels(want).c_str(), boundary_cells));
    }
    return c;
}

// Maximum heat extracted from the hot bath, heat-engine window of fig4a.
Criterion fig4a_landmarks() {
    constexpr double kRelTol = 0.01;
    Criterion c{"fig4a_landmarks"};
    const FigurePreset f = figure_preset("fig4a");
    for (const auto& [lambda, target] : {std::pair{0.0, 13.4329}, std::pair{0.9, 13.3713}}) {
        const MaxPowerResult r = refined_max_power(curve_spec(f, lambda, 400), f.filter, f.objective);
        const double rel = std::abs(r.value - target) / target;
        c.check(r.stable && rel <= kRelTol,
                fmt("λ1 = %.1f: max |Q3| = %.6f T1·γ1 at B1 = %.4f (target %.4f, ratio target/value "
                    "%.4f, grid %zu, %s)",
                    lambda, r.value, r.point.swept[0], target, target / r.value, r.grid_points,
                    r.stable ? "stable to 0.1%" : "NOT stable"));
    }
    return c;
}

// Work extraction and combined output in regime VI.
Criterion fig6_landmarks() {
    Criterion c{"fig6_landmarks"};
    const FigurePreset f = figure_preset("fig6");

    const MaxPowerResult w = refined_max_power(curve_spec(f, 0.9, 400), Regime::VI, Objective::AbsW3);
    const double eta_e = *w.point.efficiency.component("eta_E");
    c.check(std::abs(w.value - 0.1) <= 0.01,
            fmt("λ3 = 0.9: |W3|max = %.6f T1·γ1 at B3 = %.4f (target 0.1 ± 0.01, ratio target/value %.4f)",
                w.value, w.point.swept[0], 0.1 / w.value));
    c.check(std::abs(eta_e - 0.0162) <= 0.0015,
            fmt("λ3 = 0.9: η_E at |W3|max = %.6f (target 0.0162 ± 0.0015)", eta_e));

    double lo = 1.0, hi = 0.0;
    for (double lambda : f.lambdas) {
        const MaxPowerResult y = refined_max_power(curve_spec(f, lambda, 400), Regime::VI, Objective::YVI);
        const double eta = *y.point.efficiency.eta;
        lo = std::min(lo, eta);
        hi = std::max(hi, eta);
        c.check(std::abs(eta - 0.8906) <= 0.005,
                fmt("λ3 = %.1f: η_VI at max output = %.6f at B3 = %.4f (target 0.8906 ± 0.005)",
                    lambda, eta, y.point.swept[0]));
    }
    c.check(hi - lo < 0.01, fmt("η_VI spread across λ3 = %.2e (limit 0.01)", hi - lo));
    return c;
}

struct EfficiencyTally {
    std::size_t points = 0;
    std::size_t in_regime = 0;
    double equivalence = 0.0;
    double decomposition = 0.0;
    double eta_min = 0.0;
    double eta_max = 0.0;

    void add(const CurvePoint& pt, bool counted_in_regime) {
        // counted_in_regime: an in-regime sweep point, checked for the equivalences
        if (!pt.solved || !pt.efficiency.eta) return;
        ++points;
        const double eta = *pt.efficiency.eta;
        eta_min = std::min(eta_min, eta);
        eta_max = std::max(eta_max, eta);
        if (!counted_in_regime) return;
        ++in_regime;
        const auto g = generic_efficiency(pt.scaled, pt.params.T, pt.efficiency.T_r);
        equivalence = std::max(equivalence, g ? std::abs(eta - *g) / std::max(1.0, std::abs(*g))
                                              : std::numeric_limits<double>::infinity());
        const auto& e = pt.efficiency;
        if (pt.regime == Regime::V) {
            decomposition = std::max(decomposition, std::abs(eta - *e.component("eta_R") - *e.component("eta_P")));
        } else if (pt.regime == Regime::VI) {
            decomposition = std::max(decomposition, std::abs(eta - *e.component("eta_E") - *e.component("eta_AP")));
        }
    }
};

Criterion efficiency_equivalences(const std::vector<RegimeDiagram>& diagrams) {
    constexpr double kTol = 1e-12;
    constexpr double kEtaSlack = 1e-10;
    Criterion c{"efficiency_equivalences"};
    EfficiencyTally t;
    std::size_t sweeps = 0;
    for (const char* id : {"fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig4c", "fig5", "fig6"}) {
        const FigurePreset f = figure_preset(id);
        for (double lambda : f.lambdas) {
            SweepSpec spec = curve_spec(f, lambda, 400);
            for (const auto& pt : power_efficiency_curve(spec, f.filter)) t.add(pt, pt.in_regime);
            if (const auto w = bracket_regime_window(spec, f.filter)) {
                spec.axes[0].min = w->first;
                spec.axes[0].max = w->second;
                for (const auto& pt : power_efficiency_curve(spec, f.filter)) t.add(pt, pt.in_regime);
            }
            sweeps += 2;
        }
    }
    // Diagram cells enter the η range check. Their regime-formula
    // equivalence only holds to O(eps): a resolved current below eps (e.g.
    // W3 ~ -7e-10 next to λ = 0) is read as zero by the classification but
    // keeps its sign in the generic formula. Reported for information.
    EfficiencyTally cells;
    for (const auto& d : diagrams) {
        for (const auto& cell : d.cells) {
            t.add(cell, false);
            cells.add(cell, true);
        }
    }
    c.check(t.equivalence <= kTol,
            fmt("%zu in-regime points of %zu curve sweeps: max |η_regime - η_generic| = %.2e (tol %.0e)",
                t.in_regime, sweeps, t.equivalence, kTol));
    c.check(t.decomposition <= kTol,
            fmt("max |η_V - η_R - η_P|, |η_VI - η_E - η_AP| = %.2e (tol %.0e)", t.decomposition, kTol));
    c.check(t.eta_min >= 0.0 && t.eta_max <= 1.0 + kEtaSlack,
            fmt("%zu sweep points and diagram cells with an efficiency: η in [%.6f, %.12f] (allowed [0, "
                "1 + 1e-10])",
                t.points, t.eta_min, t.eta_max));
    c.lines.push_back(fmt("info %zu diagram cells: max |η_regime - η_generic| = %.2e, of order eps = 1e-9",
                          cells.in_regime, cells.equivalence));
    return c;
}

// Q1 at a given η_R along a regime-V curve (η_R rises along the window).
std::optional<double> q1_at_eta_r(const std::vector<CurvePoint>& curve, double target) {
    for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
        const auto& a = curve[k];
        const auto& b = curve[k + 1];
        if (!a.in_regime || !b.in_regime) continue;
        const double ea = *a.efficiency.component("eta_R"), eb = *b.efficiency.component("eta_R");
        if ((ea - target) * (eb - target) > 0.0 || ea == eb) continue;
        const double s = (target - ea) / (eb - ea);
        return a.scaled.Q[0] + s * (b.scaled.Q[0] - a.scaled.Q[0]);
    }
    return std::nullopt;
}

Criterion qualitative_claims() {
    Criterion c{"qualitative_claims"};

    {
        const FigurePreset f = figure_preset("fig3a");
        for (double lambda : f.lambdas) {
            SweepSpec spec = curve_spec(f, lambda, 2000);
            const auto w = bracket_regime_window(spec, f.filter);
            double best = 0.0;
            if (w) {
                spec.axes[0].min = w->first;
                spec.axes[0].max = w->second;
                for (const auto& pt : power_efficiency_curve(spec, f.filter)) {
                    if (pt.in_regime && pt.efficiency.eta) best = std::max(best, *pt.efficiency.eta);
                }
            }
            const bool ok = lambda == 0.0 ? best > 0.999 : best < 1.0;
            c.check(w && ok, fmt("refrigerator, λ1 = %.1f: sweep-max η_III = %.8f (%s)", lambda, best,
                                 lambda == 0.0 ? "> 0.999 expected" : "< 1 expected"));
        }
    }

    {
        const FigurePreset f = figure_preset("fig5");
        std::vector<std::vector<CurvePoint>> curves;
        for (double lambda : f.lambdas) {
            SweepSpec spec = curve_spec(f, lambda, 400);
            const auto w = bracket_regime_window(spec, f.filter);
            if (w) {
                spec.axes[0].min = w->first;
                spec.axes[0].max = w->second;
            }
            curves.push_back(power_efficiency_curve(spec, f.filter));
        }
        for (double target : {0.05, 0.10, 0.15, 0.20}) {
            std::vector<double> q1;
            std::string values;
            for (std::size_t k = 0; k < curves.size(); ++k) {
                const auto v = q1_at_eta_r(curves[k], target);
                q1.push_back(v.value_or(std::nan("")));
                values += fmt("%s%.5f", k ? " < " : "", q1.back());
            }
            const bool ok = std::all_of(q1.begin(), q1.end(), [](double v) { return std::isfinite(v); }) &&
                            std::is_sorted(q1.begin(), q1.end()) &&
                            std::adjacent_find(q1.begin(), q1.end()) == q1.end();
            c.check(ok, fmt("mixed regime V at η_R = %.2f: Q1 for λ3 = 0.3, 0.6, 0.9: %s", target,
                            values.c_str()));
        }
    }

    {
        const FigurePreset f = figure_preset("fig6");
        testing::ParamSampler s(109);
        int agree = 0, negative = 0;
        for (int k = 0; k < 20; ++k) {
            MachineParams p = f.base;
            set_parameter(p, "B3", s.uniform(f.axis.min, f.axis.max));
            p.lambda[2] = f.lambdas[s.index(f.lambdas.size())];
            const bool predicted = regime_VI_work_condition(p);
            const bool observed = steady_currents(p).W[2] < 0.0;
            agree += predicted == observed;
            negative += observed;
        }
        c.check(agree == 20, fmt("work condition predicts sgn W3 at %d/20 sampled points (%d with W3 < 0)",
                                 agree, negative));
    }
    return c;
}

Criterion gauge_invariance() {
    constexpr double kTol = 1e-9;
    Criterion c{"gauge_invariance"};
    const std::array<double, 3> phases{0.0, std::numbers::pi / 3.0, 4.0 * std::numbers::pi / 5.0};
    testing::ParamSampler s(110);
    double worst = 0.0;
    int cases = 0;
    for (int k = 0; k < 30; ++k) {
        MachineParams p = k < 3 ? figure_preset("fig2a").base : s.thermal();
        const std::size_t i = k < 3 ? static_cast<std::size_t>(k) : s.index(3);
        p.lambda[i] = 0.8 * std::min(1.0, testing::max_lambda(p, i));
        const CurrentsReport ref = steady_currents(p).to_figure_units(p);
        for (double phi : phases) {
            MachineParams q = p;
            q.phi[i] = phi;
            const CurrentsReport r = steady_currents(q).to_figure_units(q);
            for (std::size_t j = 0; j < 3; ++j) {
                worst = std::max({worst, std::abs(r.Q[j] - ref.Q[j]), std::abs(r.W[j] - ref.W[j])});
            }
        }
        ++cases;
    }
    c.check(worst <= kTol, fmt("%d single-coherent-reservoir points, φ in {0, π/3, 4π/5}: max current "
                               "change = %.2e T1·γ1 (tol %.0e)",
                               cases, worst, kTol));
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria: one PASS/FAIL line per criterion"};
    std::vector<std::string> expected_failures;
    bool verbose = true;
    app.add_option("--expected-failures", expected_failures,
                   "Criteria known to fail; exit status is 0 when exactly these fail")
        ->delimiter(',');
    app.add_flag("!--quiet", verbose, "Only print the PASS/FAIL lines");
    CLI11_PARSE(app, argc, argv);

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Criterion> results;
    std::vector<RegimeDiagram> diagrams;
    try {
        results.push_back(thermal_ness_closed_form());
        results.push_back(thermal_current_structure());
        results.push_back(laws_of_thermodynamics());
        results.push_back(collisional_convergence());
        results.push_back(regime_diagram_fidelity(diagrams));
        results.push_back(fig4a_landmarks());
        results.push_back(fig6_landmarks());
        results.push_back(efficiency_equivalences(diagrams));
        results.push_back(qualitative_claims());
        results.push_back(gauge_invariance());
    } catch (const std::exception& e) {
        std::cout << "ERROR acceptance run aborted: " << e.what() << '\n';
        return 2;
    }

    std::set<std::string> failed;
    for (const auto& c : results) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
        if (verbose) {
            for (const auto& line : c.lines) std::cout << "     " << line << '\n';
        }
        if (!c.passed) failed.insert(c.name);
    }
    std::cout << results.size() - failed.size() << "/" << results.size() << " criteria passed in "
              << fmt("%.1f", seconds_since(t0)) << " s\n";

    const std::set<std::string> expected(expected_failures.begin(), expected_failures.end());
    if (failed != expected) {
        std::cout << "failing criteria differ from --expected-failures\n";
        return 1;
    }
    return 0;
}
