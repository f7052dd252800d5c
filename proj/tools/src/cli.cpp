#include "qtm_cli/cli.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtm/collision.hpp"
#include "qtm/config.hpp"
#include "qtm/csv.hpp"
#include "qtm/errors.hpp"
#include "qtm/lindblad.hpp"
#include "qtm/regimes.hpp"
#include "qtm/sweep.hpp"
#include "qtm/thermo.hpp"
#include "qtm/validation.hpp"

namespace qtm::cli {

namespace {

using nlohmann::json;

struct Command {
    CLI::App* app = nullptr;
    std::set<std::string> keys; // accepted in config files and as --key flags
    KeyValues flags;
    std::string config_path;
};

void keyed_option(Command& c, const std::string& key, const std::string& help,
                  const std::string& short_name = "") {
    c.keys.insert(key);
    c.app->add_option_function<std::string>(
        (short_name.empty() ? "" : short_name + ",") + "--" + key, [&c, key](const std::string& v) { c.flags[key] = v; }, help);
}

void keyed_flag(Command& c, const std::string& key, const std::string& help) {
    c.keys.insert(key);
    c.app->add_flag_function(
        "--" + key, [&c, key](std::int64_t) { c.flags[key] = "true"; }, help);
}

class Settings {
public:
    explicit Settings(KeyValues kv) : kv_(std::move(kv)) {}

    [[nodiscard]] bool has(const std::string& key) const { return kv_.count(key) != 0; }
    [[nodiscard]] const KeyValues& all() const { return kv_; }

    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
        const auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }
    [[nodiscard]] double real(const std::string& key, double fallback) const {
        const auto it = kv_.find(key);
        return it == kv_.end() ? fallback : parse_real(key, it->second);
    }
    [[nodiscard]] std::size_t count(const std::string& key, std::size_t fallback) const {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        const double v = parse_real(key, it->second);
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
            throw ParameterError("value of '" + key + "' must be a non-negative integer");
        }
        return static_cast<std::size_t>(v);
    }
    [[nodiscard]] bool flag(const std::string& key) const {
        const std::string v = text(key, "false");
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ParameterError("value of '" + key + "' must be true or false");
    }
    // 1-based reservoir index in the interface, 0-based internally.
    [[nodiscard]] std::size_t reservoir(std::size_t fallback) const {
        if (!has("reservoir")) return fallback;
        const std::size_t r = count("reservoir", 0);
        if (r < 1 || r > 3) throw ParameterError("reservoir must be 1, 2 or 3");
        return r - 1;
    }

private:
    KeyValues kv_;
};

class Output {
public:
    Output(const Settings& s, std::ostream& fallback) : stream_(&fallback) {
        if (s.has("output")) {
            file_ = std::make_unique<std::ofstream>(s.text("output", ""));
            if (!*file_) throw ParameterError("cannot open output file '" + s.text("output", "") + "'");
            stream_ = file_.get();
        }
    }
    std::ostream& stream() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

json params_json(const MachineParams& p) {
    return json{{"B1", p.B1},        {"B2", p.B2},         {"B3", p.B3()},
                {"T", p.T},          {"gamma", p.gamma},   {"lambda", p.lambda},
                {"phi", p.phi},      {"tau", p.tau}};
}

json currents_json(const CurrentsReport& c, bool natural) {
    return json{{"units", natural ? "natural" : "T1*gamma1"},
                {"Qdot", c.Q},
                {"Wdot", c.W},
                {"Wdot_total", c.W_total},
                {"Sdot_tot", c.Sdot_tot},
                {"first_law_residual", c.first_law_residual}};
}

MachineParams base_params(const Settings& s, const std::optional<FigurePreset>& preset) {
    MachineParams base = preset ? preset->base : MachineParams{};
    base = apply_parameters(base, s.all());
    validate(base);
    return base;
}

std::optional<FigurePreset> preset_of(const Settings& s) {
    if (!s.has("preset")) return std::nullopt;
    return figure_preset(s.text("preset", ""));
}

int cmd_ness(const Settings& s, std::ostream& out) {
    const MachineParams p = base_params(s, std::nullopt);
    const bool natural = s.flag("natural-units");
    const CMatrix rho = solve_ness(p);
    const CurrentsReport natural_report = currents_report(rho, p);
    const CurrentsReport scaled = natural_report.to_figure_units(p);

    json j;
    j["params"] = params_json(p);
    std::vector<std::vector<double>> re(3, std::vector<double>(3)), im(3, std::vector<double>(3));
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            re[r][c] = rho(r, c).real();
            im[r][c] = rho(r, c).imag();
        }
    }
    j["rho"] = {{"real", re}, {"imag", im}};
    j["populations"] = {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()};
    j["currents"] = currents_json(natural ? natural_report : scaled, natural);
    j["regime"] = to_string(classify(scaled, s.real("eps", 1e-9)));
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_classify(const Settings& s, std::ostream& out) {
    const MachineParams p = base_params(s, std::nullopt);
    const CurrentsReport c = steady_currents(p).to_figure_units(p);
    out << to_string(classify(c, s.real("eps", 1e-9))) << '\n';
    return kOk;
}

SweepAxis axis_from(const Settings& s, const std::string& prefix, SweepAxis fallback) {
    SweepAxis a = fallback;
    a.name = s.text(prefix.empty() ? "axis" : prefix + "axis", a.name);
    a.min = s.real(prefix + "min", a.min);
    a.max = s.real(prefix + "max", a.max);
    a.count = s.count(prefix + "count", a.count);
    return a;
}

int cmd_diagram(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto preset = preset_of(s);
    if (preset && !preset->lambda_axis) {
        throw ParameterError("preset '" + preset->id + "' is not a regime diagram");
    }
    SweepSpec spec;
    spec.base = base_params(s, preset);
    spec.coherent_reservoir = s.reservoir(preset ? preset->reservoir : 0);
    spec.eps = s.real("eps", 1e-9);
    spec.threads = static_cast<unsigned>(s.count("threads", 0));

    SweepAxis b = preset ? preset->axis : SweepAxis{"B1", 0.01, spec.base.B2 - 0.01};
    SweepAxis l = preset ? *preset->lambda_axis
                         : SweepAxis{"lambda" + std::to_string(spec.coherent_reservoir + 1), 0.0, 1.0};
    b = axis_from(s, "b_", b);
    l.min = s.real("lambda_min", l.min);
    l.max = s.real("lambda_max", l.max);
    l.count = s.count("lambda_count", l.count);
    l.name = "lambda" + std::to_string(spec.coherent_reservoir + 1);
    spec.axes = {b, l};

    const RegimeDiagram d = regime_diagram(spec);
    csv::write_diagram(out, d, s.flag("natural-units"));
    if (s.has("overlay")) {
        std::ofstream overlay(s.text("overlay", ""));
        if (!overlay) throw ParameterError("cannot open overlay file '" + s.text("overlay", "") + "'");
        csv::write_overlay(overlay, d);
    }
    const BoundaryReport report = boundary_agreement(d);
    err << "boundary check: " << report.flips << " flips, " << report.unexplained
        << " away from analytic curves\n";
    return kOk;
}

int cmd_curve(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto preset = preset_of(s);
    if (preset && !preset->lambda_axis.has_value() && preset->lambdas.empty()) {
        throw ParameterError("preset '" + preset->id + "' is not a curve preset");
    }
    SweepSpec spec;
    spec.coherent_reservoir = s.reservoir(preset ? preset->reservoir : 0);
    MachineParams base = preset ? preset->base : MachineParams{};
    if (s.has("lambda")) base.lambda[spec.coherent_reservoir] = s.real("lambda", 0.0);
    spec.base = base_params(s, std::nullopt);
    if (preset) {
        // Parameters from the preset, overridden by explicit keys.
        spec.base = apply_parameters(base, s.all());
        validate(spec.base);
    }
    spec.eps = s.real("eps", 1e-9);
    spec.threads = static_cast<unsigned>(s.count("threads", 0));
    SweepAxis axis = preset ? preset->axis : SweepAxis{"B1", 0.01, spec.base.B2 - 0.01};
    spec.axes = {axis_from(s, "", axis)};

    const Regime filter = s.has("filter") ? parse_regime(s.text("filter", ""))
                                          : (preset ? preset->filter : Regime::III);
    if (s.flag("bracket")) {
        const auto window = bracket_regime_window(spec, filter);
        if (!window) {
            err << "regime " << to_string(filter) << " not found on the sweep range\n";
        } else {
            spec.axes[0].min = window->first;
            spec.axes[0].max = window->second;
            err << "window [" << csv::number(window->first) << ", " << csv::number(window->second)
                << "]\n";
        }
    }
    const auto curve = power_efficiency_curve(spec, filter);
    csv::write_curve(out, curve, s.flag("natural-units"));

    if (s.has("objective")) {
        const Objective o = parse_objective(s.text("objective", ""));
        try {
            const CurvePoint& best = find_max_power(curve, o);
            err << "max " << to_string(o) << " = " << csv::number(*objective_value(best, o))
                << " at " << spec.axes[0].name << " = " << csv::number(best.swept[0])
                << ", eta = " << csv::number(best.efficiency.eta) << '\n';
        } catch (const std::invalid_argument& e) {
            err << e.what() << '\n';
        }
    }
    return kOk;
}

int cmd_collide(const Settings& s, std::ostream& out) {
    const MachineParams p = base_params(s, std::nullopt);
    const std::string initial = s.text("initial", "mixed");
    CMatrix rho0;
    if (initial == "mixed") {
        rho0 = CMatrix::Identity(kSystemDim, kSystemDim) / 3.0;
    } else if (initial == "ground") {
        rho0 = CMatrix::Zero(kSystemDim, kSystemDim);
        rho0(0, 0) = 1.0;
    } else if (initial == "ness") {
        rho0 = solve_ness(p);
    } else {
        throw ParameterError("initial must be mixed, ground or ness");
    }
    const CollisionRun run =
        run_collisions(rho0, p, s.count("steps", 1000), s.real("steady_tol", 1e-12));
    csv::write_collisions(out, run, p.tau);
    return kOk;
}

int cmd_validate(const Settings& s, std::ostream& out) {
    const MachineParams p = base_params(s, std::nullopt);
    const auto checks = run_validation_suite(p);
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
    return all_passed(checks) ? kOk : kValidationFailed;
}

int cmd_transitions(const Settings& s, std::ostream& out) {
    const MachineParams p = base_params(s, std::nullopt);
    std::vector<std::size_t> reservoirs{0, 1, 2};
    if (s.has("reservoir")) reservoirs = {s.reservoir(0)};

    if (!s.has("axis")) {
        out << "reservoir,lambda_star,lambda_ne\n";
        for (std::size_t i : reservoirs) {
            const TransitionLambdas t = transition_lambdas(p, i);
            out << i + 1 << ',' << csv::number(t.lambda_star) << ',' << csv::number(t.lambda_ne)
                << '\n';
        }
        return kOk;
    }

    const SweepAxis axis = axis_from(s, "", SweepAxis{"B1", 0.01, p.B2 - 0.01, 100});
    if (!is_parameter_name(axis.name) || axis.count < 2) {
        throw ParameterError("transitions: invalid axis");
    }
    out << "B,reservoir,lambda_star,lambda_ne\n";
    for (double v : axis.values()) {
        MachineParams q = p;
        set_parameter(q, axis.name, v);
        for (std::size_t i : reservoirs) {
            const TransitionLambdas t = transition_lambdas(q, i);
            out << csv::number(v) << ',' << i + 1 << ',' << csv::number(t.lambda_star) << ','
                << csv::number(t.lambda_ne) << '\n';
        }
    }
    return kOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Three-level coherent-reservoir thermal machine toolkit", "qtm"};
    app.require_subcommand(1);

    std::map<std::string, std::unique_ptr<Command>> commands;
    auto add = [&](const std::string& name, const std::string& help,
                   const std::vector<std::pair<std::string, std::string>>& options,
                   const std::vector<std::pair<std::string, std::string>>& flags) {
        auto cmd = std::make_unique<Command>();
        cmd->app = app.add_subcommand(name, help);
        cmd->app->add_option("--config", cmd->config_path, "Flat key = value config file");
        for (const auto& key : parameter_keys()) keyed_option(*cmd, key, "Machine parameter " + key);
        keyed_option(*cmd, "output", "Write the artifact to this file instead of stdout", "-o");
        keyed_option(*cmd, "eps", "Zero threshold for currents (units of T1*gamma1)");
        for (const auto& [key, help_text] : options) keyed_option(*cmd, key, help_text);
        for (const auto& [key, help_text] : flags) keyed_flag(*cmd, key, help_text);
        commands[name] = std::move(cmd);
    };

    const std::pair<std::string, std::string> natural{"natural-units",
                                                      "Report powers in natural units, not T1*gamma1"};
    const std::pair<std::string, std::string> threads{"threads", "Worker threads (0: all cores)"};
    const std::pair<std::string, std::string> reservoir{"reservoir", "Coherent reservoir (1-3)"};
    const std::pair<std::string, std::string> preset{"preset", "Figure preset (fig2a ... fig6)"};

    add("ness", "Steady state and currents as JSON", {}, {natural});
    add("classify", "Print the operating regime at one point", {}, {});
    add("diagram", "Regime diagram CSV over (B, lambda)",
        {preset, reservoir, threads,
         {"b_axis", "Swept spacing: B1, B2 or B3"},
         {"b_min", "Spacing minimum"},
         {"b_max", "Spacing maximum"},
         {"b_count", "Spacing grid points"},
         {"lambda_min", "Coherence minimum"},
         {"lambda_max", "Coherence maximum"},
         {"lambda_count", "Coherence grid points"},
         {"overlay", "Write analytic transition curves to this CSV"}},
        {natural});
    add("curve", "Power-efficiency curve CSV along one spacing",
        {preset, reservoir, threads,
         {"lambda", "Coherence amplitude of the coherent reservoir"},
         {"axis", "Swept spacing: B1, B2 or B3"},
         {"min", "Sweep minimum"},
         {"max", "Sweep maximum"},
         {"count", "Grid points"},
         {"filter", "Regime whose window is flagged in_regime (I ... VIII)"},
         {"objective", "Report the maximum of abs_Q1, abs_Q3, abs_W3, Y_V or Y_VI"}},
        {natural, {"bracket", "Restrict the sweep to the bracketed regime window"}});
    add("collide", "Collisional trajectory and ledgers CSV",
        {{"steps", "Number of collisions"},
         {"steady_tol", "Stop once the state changes by at most this much"},
         {"initial", "Initial system state: mixed, ground or ness"}},
        {});
    add("validate", "Run the invariant suite (exit 3 on failure)", {}, {});
    add("transitions", "Coherence amplitudes of regime transitions",
        {reservoir,
         {"axis", "Tabulate along this spacing"},
         {"min", "Axis minimum"},
         {"max", "Axis maximum"},
         {"count", "Axis points"}},
        {});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        for (auto& [name, cmd] : commands) {
            if (!cmd->app->parsed()) continue;
            std::set<std::string> allowed = parameter_keys();
            allowed.insert(cmd->keys.begin(), cmd->keys.end());
            KeyValues kv;
            if (!cmd->config_path.empty()) kv = read_key_values(cmd->config_path, allowed);
            for (const auto& [key, value] : cmd->flags) {
                if (key == "B2") kv.erase("B3");
                if (key == "B3") kv.erase("B2");
                kv[key] = value;
            }
            const Settings settings(kv);
            Output output(settings, out);
            std::ostream& o = output.stream();
            if (name == "ness") return cmd_ness(settings, o);
            if (name == "classify") return cmd_classify(settings, o);
            if (name == "diagram") return cmd_diagram(settings, o, err);
            if (name == "curve") return cmd_curve(settings, o, err);
            if (name == "collide") return cmd_collide(settings, o);
            if (name == "validate") return cmd_validate(settings, o);
            if (name == "transitions") return cmd_transitions(settings, o);
        }
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << '\n';
        return kSolverError;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::out_of_range& e) {
        err << "configuration error: " << e.what() << '\n';
        return kConfigError;
    }
    return kConfigError;
}

} // namespace qtm::cli
