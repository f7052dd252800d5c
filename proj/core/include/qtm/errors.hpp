#pragma once

#include <stdexcept>
#include <string>

namespace qtm {

// Invalid physical parameters or malformed configuration. Never recoverable by
// retrying with the same inputs.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure during a solve: singular systems, non-unique steady states,
// unstable integration, non-steady input to a steady-state formula.
class SolverError : public std::runtime_error {
public:
    enum class Kind {
        SingularSystem,
        DegenerateKernel,
        ResidualTooLarge,
        NegativeState,
        StepInstability,
        NotSteady,
        NonlinearRegime,
    };

    SolverError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

} // namespace qtm
