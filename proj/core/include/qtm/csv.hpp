#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qtm/collision.hpp"
#include "qtm/sweep.hpp"

namespace qtm::csv {

// Fixed 12-significant-digit formatting ("%.12g"); NaN prints as "nan".
std::string number(double v);
std::string number(const std::optional<double>& v); // empty field when absent

// Column headers, shared with the plotting scripts.
const std::vector<std::string>& diagram_columns();
const std::vector<std::string>& overlay_columns();
const std::vector<std::string>& curve_columns();
const std::vector<std::string>& collision_columns();

// Currents are written in units of T1·γ1 unless natural_units is set.
void write_diagram(std::ostream& out, const RegimeDiagram& d, bool natural_units = false);
void write_overlay(std::ostream& out, const RegimeDiagram& d);
void write_curve(std::ostream& out, const std::vector<CurvePoint>& curve,
                 bool natural_units = false);
// Per-collision energies (not rates) in natural units; row k is the state after
// collision k.
void write_collisions(std::ostream& out, const CollisionRun& run, double tau);

} // namespace qtm::csv
