#pragma once

#include <array>
#include <vector>

#include "qtm/lindblad.hpp"
#include "qtm/model.hpp"

namespace qtm {

struct CollisionRecord {
    CMatrix rho_before; // 3×3
    CMatrix rho_after;  // 3×3
    std::array<CMatrix, kReservoirs> unit_after{};

    double dE_S = 0.0;
    std::array<double, kReservoirs> dE_R{};
    std::array<double, kReservoirs> Q{}; // T_i Tr[Δρ_R ln ρ_R]
    std::array<double, kReservoirs> W{}; // −ΔE_R − Q, exact at finite τ
    double W_mec = 0.0;                  // Tr[(H_S + ΣH_R) Δρ_SR]

    double dS_sys = 0.0;
    std::array<double, kReservoirs> dS_R{};
    std::array<double, kReservoirs> relent{}; // S(ρ'_R ‖ ρ_R)
    std::array<double, kReservoirs> dC{};     // change of relative entropy of coherence
    double S_tot = 0.0;
};

// Precomputed collision step for fixed parameters: fresh units of all three
// reservoirs interact jointly with the system for a time τ through
// U = exp(−i H_total τ).
class CollisionModel {
public:
    // Throws ParameterError on invalid params or a non-PSD unit state.
    explicit CollisionModel(const MachineParams& p);

    [[nodiscard]] const MachineParams& params() const { return params_; }
    [[nodiscard]] const CMatrix& unitary() const { return unitary_; }
    [[nodiscard]] const std::array<CMatrix, kReservoirs>& unit_states() const { return units_; }

    // One collision with full energetic and entropic bookkeeping.
    [[nodiscard]] CollisionRecord collide(const CMatrix& rho_s) const;

    // Reduced system state after one collision (no bookkeeping). Linear in
    // rho_s, so it also accepts non-Hermitian basis matrices.
    [[nodiscard]] CMatrix step(const CMatrix& rho_s) const;

    // The one-collision channel Φ as a 9×9 superoperator.
    [[nodiscard]] Superoperator channel() const;

private:
    [[nodiscard]] CMatrix joint_after(const CMatrix& rho_s) const;

    MachineParams params_;
    Hamiltonians h_;
    CMatrix unitary_;
    CMatrix units_joint_; // ρ_R^(1) ⊗ ρ_R^(2) ⊗ ρ_R^(3)
    std::array<CMatrix, kReservoirs> units_{};
    std::array<CMatrix, kReservoirs> log_units_{};
    std::array<double, kReservoirs> unit_entropy_{};
    std::array<double, kReservoirs> unit_coherence_{};
};

CollisionRecord collide(const CMatrix& rho_s, const MachineParams& p);

struct CollisionRun {
    std::vector<CMatrix> states; // ρ_S after 0, 1, …, steps collisions
    std::vector<CollisionRecord> records;
    std::array<double, kReservoirs> cumulative_Q{};
    std::array<double, kReservoirs> cumulative_W{};
    std::size_t steps = 0;
    bool steady = false; // stopped early: ‖ρ_S(t+τ) − ρ_S(t)‖∞ ≤ steady_tol
};

// Repeated collisions with fresh units. Stops after n collisions or as soon as
// the system state changes by at most steady_tol in one collision. Throws
// ParameterError for n = 0.
CollisionRun run_collisions(const CMatrix& rho0, const MachineParams& p, std::size_t n,
                            double steady_tol = 1e-12);

// Fixed point of the one-collision channel, from the kernel of Φ − I.
CMatrix collisional_steady_state(const CollisionModel& model);

// (Φ − I)/τ, assembled column by column from the 9 matrix units |j><k|.
Superoperator effective_generator(const CollisionModel& model);
Superoperator effective_generator(const MachineParams& p);

struct GeneratorConvergence {
    double tau = 0.0;
    double discrepancy = 0.0;      // max|L_coll(τ) − L|
    double half_discrepancy = 0.0; // max|L_coll(τ/2) − L|
    double ratio = 0.0;            // discrepancy / half_discrepancy
    bool linear_regime = false;    // ratio ∈ [1.8, 2.2]
};

// Compares the collisional generator at p.tau and p.tau/2 with the Lindblad
// generator.
GeneratorConvergence generator_convergence(const MachineParams& p);

// As above, but throws SolverError(NonlinearRegime) when the halving ratio is
// outside [1.8, 2.2].
GeneratorConvergence require_linear_regime(const MachineParams& p);

} // namespace qtm
