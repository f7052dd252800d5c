#include "qtm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qtm/errors.hpp"
#include "qtm/lindblad.hpp"

namespace qtm {

namespace {

bool is_spacing(const std::string& name) {
    return name == "B1" || name == "B2" || name == "B3";
}

std::string lambda_name(std::size_t reservoir) {
    return "lambda" + std::to_string(reservoir + 1);
}

bool thermal(const MachineParams& p) {
    return std::all_of(p.lambda.begin(), p.lambda.end(), [](double l) { return l == 0.0; });
}

SweepSpec with_axis(const SweepSpec& spec, double min, double max, std::size_t count) {
    SweepSpec out = spec;
    out.axes[0].min = min;
    out.axes[0].max = max;
    out.axes[0].count = count;
    return out;
}

bool in_window(const SweepSpec& spec, double value, Regime filter) {
    MachineParams p = spec.base;
    set_parameter(p, spec.axes[0].name, value);
    const CurvePoint point = evaluate_point(p, spec.eps);
    return point.solved && matches_filter(point.regime, filter, p);
}

// Bisects between an out-of-window and an in-window value; returns the
// in-window end of the final interval.
double bisect_edge(const SweepSpec& spec, double out, double in, Regime filter, double width) {
    while (std::abs(in - out) > width) {
        const double mid = 0.5 * (in + out);
        if (in_window(spec, mid, filter)) {
            in = mid;
        } else {
            out = mid;
        }
    }
    return in;
}

} // namespace

std::vector<double> SweepAxis::values() const {
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) {
        // exact endpoints regardless of rounding in the step
        v[k] = k + 1 == count ? max : min + static_cast<double>(k) * step();
    }
    return v;
}

void validate_spec(const SweepSpec& spec, std::size_t dimensions) {
    if (spec.axes.size() != dimensions) {
        throw ParameterError("sweep needs exactly " + std::to_string(dimensions) + " axis/axes");
    }
    for (const auto& axis : spec.axes) {
        if (!is_parameter_name(axis.name)) {
            throw ParameterError("sweep axis '" + axis.name + "' is not a parameter name");
        }
        if (axis.count < 2) throw ParameterError("sweep axis '" + axis.name + "' needs count >= 2");
        if (!(axis.max > axis.min) || !std::isfinite(axis.min) || !std::isfinite(axis.max)) {
            throw ParameterError("sweep axis '" + axis.name + "' needs min < max");
        }
    }
    if (spec.coherent_reservoir >= kReservoirs) {
        throw ParameterError("coherent reservoir must be 1, 2 or 3");
    }
    if (!(spec.eps > 0.0)) throw ParameterError("eps must be positive");
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                fn(k);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

CurvePoint evaluate_point(const MachineParams& p, double eps) {
    CurvePoint point;
    point.params = p;
    try {
        const bool thermal = p.lambda == std::array<double, kReservoirs>{0.0, 0.0, 0.0};
        point.currents = thermal ? thermal_currents(p) : steady_currents(p);
        point.scaled = point.currents.to_figure_units(p);
        point.regime = classify(point.scaled, eps);
        point.efficiency = regime_efficiency(point.scaled, point.regime, p.T, eps);
        point.solved = true;
    } catch (const SolverError& e) {
        point.error = e.what();
    } catch (const ParameterError& e) {
        point.error = e.what();
    }
    if (!point.solved) point.regime = Regime::Unclassified;
    return point;
}

RegimeDiagram regime_diagram(const SweepSpec& spec) {
    validate_spec(spec, 2);
    const SweepAxis& b_axis = spec.axes[0];
    const SweepAxis& l_axis = spec.axes[1];
    if (!is_spacing(b_axis.name)) {
        throw ParameterError("diagram: first axis must be B1, B2 or B3");
    }
    if (l_axis.name != lambda_name(spec.coherent_reservoir)) {
        throw ParameterError("diagram: second axis must be " + lambda_name(spec.coherent_reservoir));
    }

    RegimeDiagram d;
    d.b_axis = b_axis;
    d.lambda_axis = l_axis;
    d.reservoir = spec.coherent_reservoir;
    d.eps = spec.eps;
    d.b_values = b_axis.values();
    d.lambda_values = l_axis.values();
    const std::size_t nb = d.b_values.size();
    const std::size_t nl = d.lambda_values.size();
    d.cells.resize(nb * nl);
    d.overlays.resize(nb);

    parallel_for(nb * nl, spec.threads, [&](std::size_t k) {
        MachineParams p = spec.base;
        const std::size_t column = k % nb;
        const std::size_t row = k / nb;
        set_parameter(p, b_axis.name, d.b_values[column]);
        set_parameter(p, l_axis.name, d.lambda_values[row]);
        CurvePoint point = evaluate_point(p, spec.eps);
        point.swept = {d.b_values[column], d.lambda_values[row]};
        point.in_regime = point.solved;
        d.cells[k] = std::move(point);
    });

    for (std::size_t column = 0; column < nb; ++column) {
        MachineParams p = spec.base;
        set_parameter(p, b_axis.name, d.b_values[column]);
        try {
            d.overlays[column] = transition_lambdas(p, spec.coherent_reservoir);
        } catch (const ParameterError&) {
            d.overlays[column] = {};
        }
    }
    d.thermal_transition = thermal_transition(spec.base, b_axis.name);
    return d;
}

namespace {

// True when every sign that changes between rows j and j + 1 of column c is
// zero on rows 0 … j.
bool onset_from_zero(const RegimeDiagram& d, std::size_t c, std::size_t j) {
    const auto signs = [&](std::size_t row) {
        const CurvePoint& p = d.at(c, row);
        return p.solved ? std::optional(current_signs(p.scaled, d.eps)) : std::nullopt;
    };
    const auto below = signs(j);
    const auto above = signs(j + 1);
    if (!below || !above) return false;
    for (std::size_t k = 0; k < 4; ++k) {
        if ((*below)[k] == (*above)[k]) continue;
        for (std::size_t row = 0; row <= j; ++row) {
            const auto s = signs(row);
            if (!s || (*s)[k] != 0) return false;
        }
    }
    return true;
}

} // namespace

BoundaryReport boundary_agreement(const RegimeDiagram& d) {
    BoundaryReport report;
    const std::size_t nb = d.b_values.size();
    const std::size_t nl = d.lambda_values.size();
    const double step = d.lambda_axis.step();
    report.columns = nb;

    auto near = [](const std::optional<double>& curve, double lo, double hi) {
        return curve && *curve >= lo && *curve <= hi;
    };

    for (std::size_t c = 0; c < nb; ++c) {
        const TransitionLambdas& ov = d.overlays[c];
        std::vector<std::size_t> flip_rows;
        for (std::size_t j = 0; j + 1 < nl; ++j) {
            const Regime a = d.at(c, j).regime;
            const Regime b = d.at(c, j + 1).regime;
            if (a == b) continue;
            ++report.flips;
            flip_rows.push_back(j);
            const double lo = d.lambda_values[j] - step;
            const double hi = d.lambda_values[j + 1] + step;
            bool explained = (lo <= 0.0 && hi >= 0.0) || near(ov.lambda_star, lo, hi) ||
                             near(ov.lambda_ne, lo, hi);
            if (!explained && onset_from_zero(d, c, j)) {
                explained = true;
                ++report.threshold_onsets;
            }
            if (!explained) {
                ++report.unexplained;
                if (report.details.size() < 20) {
                    std::ostringstream os;
                    os << d.b_axis.name << "=" << d.b_values[c] << ": " << to_string(a) << "->"
                       << to_string(b) << " between lambda " << d.lambda_values[j] << " and "
                       << d.lambda_values[j + 1];
                    report.details.push_back(os.str());
                }
            }
        }

        for (const auto& curve : {ov.lambda_star, ov.lambda_ne}) {
            if (!curve || *curve <= d.lambda_values.front() || *curve >= d.lambda_values.back()) {
                continue;
            }
            ++report.curve_crossings;
            const bool seen = std::any_of(flip_rows.begin(), flip_rows.end(), [&](std::size_t j) {
                return *curve >= d.lambda_values[j] - step && *curve <= d.lambda_values[j + 1] + step;
            });
            if (!seen) ++report.missed_crossings;
        }
    }
    return report;
}

std::vector<Regime> regime_inventory(const RegimeDiagram& d) {
    std::vector<Regime> out;
    for (const auto& cell : d.cells) {
        if (std::find(out.begin(), out.end(), cell.regime) == out.end()) out.push_back(cell.regime);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool matches_filter(Regime observed, Regime filter, const MachineParams& p) {
    if (observed == filter) return true;
    if (!thermal(p)) return false;
    return (filter == Regime::III && observed == Regime::I) ||
           (filter == Regime::IV && observed == Regime::II);
}

std::vector<CurvePoint> power_efficiency_curve(const SweepSpec& spec, Regime filter) {
    validate_spec(spec, 1);
    const SweepAxis& axis = spec.axes[0];
    const std::vector<double> values = axis.values();
    std::vector<CurvePoint> curve(values.size());
    parallel_for(values.size(), spec.threads, [&](std::size_t k) {
        MachineParams p = spec.base;
        set_parameter(p, axis.name, values[k]);
        CurvePoint point = evaluate_point(p, spec.eps);
        point.swept = {values[k]};
        point.in_regime = point.solved && matches_filter(point.regime, filter, p);
        curve[k] = std::move(point);
    });
    return curve;
}

std::string to_string(Objective o) {
    switch (o) {
    case Objective::AbsQ1: return "abs_Q1";
    case Objective::AbsQ3: return "abs_Q3";
    case Objective::AbsW3: return "abs_W3";
    case Objective::YV: return "Y_V";
    case Objective::YVI: return "Y_VI";
    }
    return "";
}

Objective parse_objective(const std::string& name) {
    for (Objective o : {Objective::AbsQ1, Objective::AbsQ3, Objective::AbsW3, Objective::YV,
                        Objective::YVI}) {
        if (to_string(o) == name) return o;
    }
    throw std::invalid_argument("unknown objective '" + name +
                                "' (abs_Q1, abs_Q3, abs_W3, Y_V, Y_VI)");
}

std::optional<double> objective_value(const CurvePoint& point, Objective o) {
    if (!point.solved) return std::nullopt;
    switch (o) {
    case Objective::AbsQ1: return std::abs(point.scaled.Q[0]);
    case Objective::AbsQ3: return std::abs(point.scaled.Q[2]);
    case Objective::AbsW3: return std::abs(point.scaled.W[2]);
    case Objective::YV:
        if (point.regime != Regime::V) return std::nullopt;
        return point.efficiency.Y_output;
    case Objective::YVI:
        if (point.regime != Regime::VI) return std::nullopt;
        return point.efficiency.Y_output;
    }
    return std::nullopt;
}

const CurvePoint& find_max_power(const std::vector<CurvePoint>& curve, Objective o) {
    const CurvePoint* best = nullptr;
    double best_value = 0.0;
    for (const auto& point : curve) {
        if (!point.in_regime) continue;
        const auto value = objective_value(point, o);
        if (!value) continue;
        const bool better =
            !best || *value > best_value ||
            (*value == best_value && point.swept.at(0) < best->swept.at(0));
        if (better) {
            best = &point;
            best_value = *value;
        }
    }
    if (!best) {
        throw std::invalid_argument("find_max_power: no in-regime point defines " + to_string(o));
    }
    return *best;
}

std::optional<std::pair<double, double>> bracket_regime_window(const SweepSpec& spec,
                                                               Regime filter, std::size_t coarse,
                                                               double rel_tol) {
    validate_spec(spec, 1);
    const SweepAxis& axis = spec.axes[0];
    const SweepSpec scan = with_axis(spec, axis.min, axis.max, std::max<std::size_t>(coarse, 2));
    const std::vector<CurvePoint> curve = power_efficiency_curve(scan, filter);

    std::optional<std::size_t> first, last;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        if (!curve[k].in_regime) continue;
        if (!first) first = k;
        last = k;
    }
    if (!first) return std::nullopt;

    const double width = rel_tol * (axis.max - axis.min);
    const auto v = [&](std::size_t k) { return curve[k].swept[0]; };
    double lo = v(*first);
    double hi = v(*last);
    if (*first > 0) lo = bisect_edge(spec, v(*first - 1), lo, filter, width);
    if (*last + 1 < curve.size()) hi = bisect_edge(spec, v(*last + 1), hi, filter, width);
    return std::make_pair(lo, hi);
}

MaxPowerResult refined_max_power(const SweepSpec& spec, Regime filter, Objective o,
                                 double rel_tol, std::size_t max_doublings) {
    const auto window = bracket_regime_window(spec, filter);
    if (!window || !(window->second > window->first)) {
        throw std::invalid_argument("refined_max_power: regime " + to_string(filter) +
                                    " not found on the sweep range");
    }

    MaxPowerResult result;
    result.window = *window;
    std::size_t count = std::max<std::size_t>(spec.axes[0].count, 2);
    std::optional<double> previous;
    for (std::size_t round = 0; round <= max_doublings; ++round, count = 2 * count - 1) {
        const SweepSpec refined = with_axis(spec, window->first, window->second, count);
        const auto curve = power_efficiency_curve(refined, filter);
        const CurvePoint& best = find_max_power(curve, o);
        const double value = *objective_value(best, o);
        result.point = best;
        result.grid_points = count;
        result.value = value;
        if (previous) {
            result.previous_value = *previous;
            if (std::abs(value - *previous) <= rel_tol * std::abs(value)) {
                result.stable = true;
                break;
            }
        }
        previous = value;
    }
    return result;
}

FigurePreset figure_preset(const std::string& id) {
    FigurePreset f;
    f.id = id;
    MachineParams& p = f.base;
    p.gamma = {8.7e-3, 5.7e-3, 7.5e-3};
    p.phi = {0.0, 0.0, 0.0};
    p.lambda = {0.0, 0.0, 0.0};
    const std::vector<double> family{0.0, 0.3, 0.6, 0.9};

    if (id == "fig2a" || id == "fig2b" || id == "fig2c") {
        p.T = {1.0, 6.0, 10.0};
        if (id == "fig2a") {
            p.B1 = 6.0;
            p.B2 = 12.0;
            f.reservoir = 0;
            f.axis = {"B1", 0.01, 11.99, kDefaultGridPoints};
            f.lambda_axis = SweepAxis{"lambda1", 0.0, 1.0, kDefaultGridPoints};
        } else if (id == "fig2b") {
            p.B1 = 6.0;
            p.B2 = 12.0;
            f.reservoir = 1;
            f.axis = {"B2", 6.1, 120.0, kDefaultGridPoints};
            f.lambda_axis = SweepAxis{"lambda2", 0.0, 1.0, kDefaultGridPoints};
        } else {
            p.B1 = 6.0;
            p.B2 = 12.0;
            f.reservoir = 2;
            f.axis = {"B3", 0.3, 120.0, kDefaultGridPoints};
            f.lambda_axis = SweepAxis{"lambda3", 0.0, 5.0, kDefaultGridPoints};
        }
        return f;
    }

    if (id == "fig3a" || id == "fig3b" || id == "fig3c") {
        p.T = {1.0, 2.0, 60.0};
        f.filter = Regime::III;
        f.objective = Objective::AbsQ1;
        f.lambdas = family;
        if (id == "fig3a") {
            p.B1 = 4.0;
            p.B2 = 9.5;
            f.reservoir = 0;
            f.axis = {"B1", 0.01, 9.49, kDefaultGridPoints};
        } else {
            p.B1 = 1.24;
            p.B2 = 10.0;
            f.reservoir = id == "fig3b" ? 1 : 2;
            f.axis = id == "fig3b" ? SweepAxis{"B2", 1.25, 40.0, kDefaultGridPoints}
                                   : SweepAxis{"B3", 0.01, 40.0, kDefaultGridPoints};
        }
        return f;
    }

    if (id == "fig4a" || id == "fig4b" || id == "fig4c") {
        p.T = {1.0, 30.0, 60.0};
        f.filter = Regime::IV;
        f.objective = Objective::AbsQ3;
        f.lambdas = family;
        if (id == "fig4a") {
            p.B1 = 4.0;
            p.B2 = 35.31;
            f.reservoir = 0;
            f.axis = {"B1", 0.01, 35.30, kDefaultGridPoints};
        } else {
            p.B1 = 4.34;
            p.B2 = 40.0;
            f.reservoir = id == "fig4b" ? 1 : 2;
            f.axis = id == "fig4b" ? SweepAxis{"B2", 4.35, 150.0, kDefaultGridPoints}
                                   : SweepAxis{"B3", 0.01, 150.0, kDefaultGridPoints};
        }
        return f;
    }

    if (id == "fig5") {
        p.T = {1.0, 1.1, 60.0};
        p.B1 = 4.34;
        p.B2 = 5.0;
        f.reservoir = 2;
        f.axis = {"B3", 0.01, 20.0, kDefaultGridPoints};
        f.lambdas = {0.3, 0.6, 0.9};
        f.filter = Regime::V;
        f.objective = Objective::YV;
        return f;
    }

    if (id == "fig6") {
        p.T = {1.0, 30.0, 60.0};
        p.B1 = 4.34;
        p.B2 = 20.0;
        f.reservoir = 2;
        f.axis = {"B3", 0.01, 80.0, kDefaultGridPoints};
        f.lambdas = {0.3, 0.6, 0.9};
        f.filter = Regime::VI;
        f.objective = Objective::YVI;
        return f;
    }

    throw ParameterError("unknown figure preset '" + id + "'");
}

std::vector<std::string> figure_preset_ids() {
    return {"fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c",
            "fig4a", "fig4b", "fig4c", "fig5",  "fig6"};
}

SweepSpec curve_spec(const FigurePreset& preset, double lambda, std::size_t count) {
    SweepSpec spec;
    spec.base = preset.base;
    spec.base.lambda[preset.reservoir] = lambda;
    spec.coherent_reservoir = preset.reservoir;
    spec.axes = {preset.axis};
    spec.axes[0].count = count;
    return spec;
}

SweepSpec diagram_spec(const FigurePreset& preset, std::size_t b_count, std::size_t lambda_count) {
    if (!preset.lambda_axis) {
        throw ParameterError("preset '" + preset.id + "' is not a regime diagram");
    }
    SweepSpec spec;
    spec.base = preset.base;
    spec.coherent_reservoir = preset.reservoir;
    spec.axes = {preset.axis, *preset.lambda_axis};
    spec.axes[0].count = b_count;
    spec.axes[1].count = lambda_count;
    return spec;
}

} // namespace qtm
