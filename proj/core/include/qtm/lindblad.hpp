#pragma once

#include <vector>

#include "qtm/linalg.hpp"
#include "qtm/model.hpp"

namespace qtm {

// Linear map on column-stacked 3×3 density matrices: vec(L(ρ)) = matrix·vec(ρ).
struct Superoperator {
    CMatrix matrix; // 9×9

    [[nodiscard]] CMatrix apply(const CMatrix& rho) const;
};

// Vectorized building blocks (column stacking):
//   vec(AρB) = (Bᵀ ⊗ A) vec(ρ)
CMatrix left_right(const CMatrix& left, const CMatrix& right);
CMatrix commutator_superop(const CMatrix& h);                // −i[h, ·]
CMatrix dissipator_superop(const CMatrix& jump, double rate); // rate·(LρL† − ½{L†L, ρ})

// Effective system Hamiltonian H_S + Σ G_S^(i), with
// G_S^(i) = λ_i|g_i|(e^{iφ_i}|lo><hi| + e^{−iφ_i}|hi><lo|).
CMatrix effective_hamiltonian(const Couplings& c);

// Continuous-limit generator: −i[H_S + ΣG_S^(i), ρ] + Σ_i D_i(ρ), where D_i has
// jumps |lo><hi| at γ⁻_i and |hi><lo| at γ⁺_i on the transition of reservoir i.
Superoperator build_liouvillian(const MachineParams& p);
Superoperator build_liouvillian(const Couplings& c);

// Unique unit-trace fixed point of a trace-preserving generator. Eigenvalues in
// [−1e−12, 0) are clipped and the state renormalized; anything more negative
// throws SolverError(NegativeState). Throws ResidualTooLarge if ‖Lρ‖∞ > 1e−10.
CMatrix steady_state(const Superoperator& generator);

CMatrix solve_ness(const MachineParams& p);

struct Trajectory {
    std::vector<double> times;
    std::vector<CMatrix> states;
};

// Fixed-step RK4 for ρ̇ = L(ρ). For a linear generator one RK4 step is the
// propagator I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24. The step is shrunk so that
// an integer number of steps ends on t_final. States are recorded every
// `stride` steps plus the final one.
//
// Throws SolverError(StepInstability) when the step propagator is expanding or
// trace/Hermiticity drift is detected; the message advises a smaller dt.
Trajectory evolve(const CMatrix& rho0, const Superoperator& generator, double t_final,
                  double dt, std::size_t stride = 1);
Trajectory evolve(const CMatrix& rho0, const MachineParams& p, double t_final, double dt,
                  std::size_t stride = 1);

} // namespace qtm
