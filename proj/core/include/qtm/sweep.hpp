#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtm/efficiency.hpp"
#include "qtm/model.hpp"
#include "qtm/regimes.hpp"
#include "qtm/thermo.hpp"

namespace qtm {

inline constexpr std::size_t kDefaultGridPoints = 400;

// Linearly spaced axis over a named parameter (see set_parameter).
struct SweepAxis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    std::size_t count = kDefaultGridPoints;

    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] double step() const { return (max - min) / static_cast<double>(count - 1); }
};

struct SweepSpec {
    MachineParams base;
    std::vector<SweepAxis> axes;
    std::size_t coherent_reservoir = 0; // 0-based
    double eps = 1e-9;                  // classification threshold in T1·γ1 units
    unsigned threads = 0;               // 0: hardware concurrency
};

// Throws ParameterError for counts below 2, unknown names or inverted ranges.
void validate_spec(const SweepSpec& spec, std::size_t dimensions);

// Runs fn(k) for k in [0, n) on a pool of worker threads. Results must be
// written to slot k by fn; completion order never affects output.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

struct CurvePoint {
    std::vector<double> swept;   // one value per axis
    MachineParams params;
    CurrentsReport currents;     // natural units
    CurrentsReport scaled;       // units of T1·γ1
    Regime regime = Regime::Unclassified;
    EfficiencyReport efficiency; // for the classified regime
    bool in_regime = false;
    bool solved = false;
    std::string error;           // solver/parameter failure message when !solved
};

// Solves, classifies (eps in T1·γ1 units) and evaluates the efficiency of the
// classified regime at one parameter point. Points with every λ = 0 take the
// closed-form thermal currents. Failures are recorded, not thrown.
CurvePoint evaluate_point(const MachineParams& p, double eps = 1e-9);

struct RegimeDiagram {
    SweepAxis b_axis;
    SweepAxis lambda_axis;
    std::size_t reservoir = 0;
    double eps = 1e-9; // classification threshold the cells were labelled with
    std::vector<double> b_values;
    std::vector<double> lambda_values;
    std::vector<CurvePoint> cells;           // index = row·nb + column, row = λ index
    std::vector<TransitionLambdas> overlays; // per column
    std::optional<double> thermal_transition;

    [[nodiscard]] const CurvePoint& at(std::size_t column, std::size_t row) const {
        return cells[row * b_values.size() + column];
    }
};

// axes[0]: a level spacing (B1, B2 or B3); axes[1]: lambda_i of the coherent
// reservoir i.
RegimeDiagram regime_diagram(const SweepSpec& spec);

struct BoundaryReport {
    std::size_t columns = 0;
    std::size_t flips = 0;
    std::size_t threshold_onsets = 0; // explained by λ = 0 through the eps dead zone
    std::size_t unexplained = 0;      // flips with no analytic curve within one step
    std::size_t curve_crossings = 0;  // analytic curve values inside the λ range
    std::size_t missed_crossings = 0; // crossings with no flip within one step
    std::vector<std::string> details; // first few offending cells

    [[nodiscard]] bool ok() const { return unexplained == 0; }
};

// Checks every vertical label flip against λ*, λ^NE and λ = 0 on its column.
// Currents that vanish at λ = 0 grow like λ² and stay below eps for a few rows;
// a flip whose changed signs all read zero on every row from λ = 0 up to it is
// attributed to λ = 0 and counted in threshold_onsets.
BoundaryReport boundary_agreement(const RegimeDiagram& diagram);

// Regimes present in the diagram, in enum order.
std::vector<Regime> regime_inventory(const RegimeDiagram& diagram);

// Regime I counts as III and II as IV on thermal (all λ = 0) points, matching
// how the thermal baseline continues the coherent curves.
bool matches_filter(Regime observed, Regime filter, const MachineParams& p);

// 1D sweep; every point is emitted, flagged in_regime when it passes the
// filter.
std::vector<CurvePoint> power_efficiency_curve(const SweepSpec& spec, Regime filter);

enum class Objective { AbsQ1, AbsQ3, AbsW3, YV, YVI };
std::string to_string(Objective o);
Objective parse_objective(const std::string& name);
// Objective value in T1·γ1 units; empty when undefined at the point.
std::optional<double> objective_value(const CurvePoint& point, Objective o);

// Argmax over in-regime points; ties go to the smaller swept value. Throws
// std::invalid_argument when no in-regime point carries the objective.
const CurvePoint& find_max_power(const std::vector<CurvePoint>& curve, Objective o);

// Smallest and largest swept value of the filter's window on [min, max]:
// a coarse scan followed by bisection of both edges to rel_tol of the range.
// Empty when no coarse point is in the window.
std::optional<std::pair<double, double>> bracket_regime_window(const SweepSpec& spec,
                                                               Regime filter,
                                                               std::size_t coarse = 200,
                                                               double rel_tol = 1e-10);

struct MaxPowerResult {
    CurvePoint point;
    std::size_t grid_points = 0;
    double previous_value = 0.0; // objective at half the final density
    double value = 0.0;
    bool stable = false;         // relative change < rel_tol on the last doubling
    std::pair<double, double> window{0.0, 0.0};
};

// Brackets the window, then doubles the grid density (starting at spec count)
// until the maximum objective moves by less than rel_tol.
MaxPowerResult refined_max_power(const SweepSpec& spec, Regime filter, Objective o,
                                 double rel_tol = 1e-3, std::size_t max_doublings = 8);

// Parameter sets and axes for the reference diagrams and performance curves.
struct FigurePreset {
    std::string id;
    MachineParams base;
    SweepAxis axis;                 // swept spacing
    std::size_t reservoir = 0;      // coherent reservoir (0-based)
    std::optional<SweepAxis> lambda_axis; // diagrams only
    std::vector<double> lambdas;    // curve families
    Regime filter = Regime::Unclassified;
    Objective objective = Objective::AbsQ1;
};

// ids: fig2a fig2b fig2c fig3a fig3b fig3c fig4a fig4b fig4c fig5 fig6.
FigurePreset figure_preset(const std::string& id);
std::vector<std::string> figure_preset_ids();

// SweepSpec for a curve preset at a given coherence amplitude.
SweepSpec curve_spec(const FigurePreset& preset, double lambda, std::size_t count);
// SweepSpec for a diagram preset.
SweepSpec diagram_spec(const FigurePreset& preset, std::size_t b_count, std::size_t lambda_count);

} // namespace qtm
