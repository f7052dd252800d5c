#pragma once

#include <string>
#include <vector>

#include "qtm/model.hpp"

namespace qtm {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Invariant checks at one parameter point: Hamiltonian structure, generator
// trace/Hermiticity preservation, NESS residual and positivity, first and
// second law, thermal closed forms, transition amplitudes, collision
// bookkeeping, generator convergence, phase gauge and efficiency
// equivalences. Checks that do not apply at p are reported as passed with a
// "skipped" detail. Solver failures become failed checks.
std::vector<Check> run_validation_suite(const MachineParams& p);

bool all_passed(const std::vector<Check>& checks);

} // namespace qtm
