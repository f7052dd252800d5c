#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "qtm/linalg.hpp"

namespace qtm {

inline constexpr std::size_t kReservoirs = 3;
inline constexpr Eigen::Index kSystemDim = 3;
inline constexpr Eigen::Index kUnitDim = 2;
inline constexpr Eigen::Index kJointDim = 24; // 3 · 2 · 2 · 2

// Full parameterization of the machine and its three collisional reservoirs.
// Energies are in units of k_B·T1 scale chosen by the caller (k_B = 1); rates
// in inverse time. B3 is not stored: resonance fixes it to B2 − B1.
struct MachineParams {
    double B1 = 3.0;
    double B2 = 12.0;
    std::array<double, kReservoirs> T{1.0, 6.0, 10.0};
    std::array<double, kReservoirs> gamma{8.7e-3, 5.7e-3, 7.5e-3};
    std::array<double, kReservoirs> lambda{0.0, 0.0, 0.0};
    std::array<double, kReservoirs> phi{0.0, 0.0, 0.0};
    double tau = 1e-3;

    [[nodiscard]] double B3() const { return B2 - B1; }
    [[nodiscard]] std::array<double, kReservoirs> B() const { return {B1, B2, B3()}; }
    [[nodiscard]] double beta(std::size_t i) const { return 1.0 / T.at(i); }
};

// Strict validation: rejects, never clamps. Throws ParameterError naming the
// violated invariant.
void validate(const MachineParams& p);

// Level pair (lower, upper) of the system transition driven by reservoir i:
// 0: |0>↔|1>, 1: |0>↔|2>, 2: |1>↔|2>.
struct Transition {
    Eigen::Index lower;
    Eigen::Index upper;
};
Transition transition(std::size_t i);

// Bose occupation n̄ = 1/(e^{βB} − 1).
double bose_occupation(double energy, double temperature);

// Derived per-reservoir coefficients. Jump rates follow the convention under
// which the steady-state heat currents read Q̇_i = 2B_iγ_i(n̄_i ρ_lo − (1+n̄_i) ρ_hi):
//   γ⁺ = 2γn̄, γ⁻ = 2γ(n̄+1), |g| = sqrt(2γ(2n̄+1)),
// so that γ⁺ = |g|²·p_e and γ⁻ = |g|²·p_g for the unit populations p_e, p_g.
struct Rates {
    std::array<double, kReservoirs> nbar{};
    std::array<double, kReservoirs> gamma_plus{};
    std::array<double, kReservoirs> gamma_minus{};
    std::array<double, kReservoirs> coupling{};
};
Rates occupations_and_rates(const MachineParams& p);

// Coefficients consumed by the generator and the collision unitary. Kept
// separate from MachineParams so decoupled limits (γ = 0) can be built
// without passing validation.
struct Couplings {
    std::array<double, kReservoirs> B{};
    std::array<double, kReservoirs> gamma_plus{};
    std::array<double, kReservoirs> gamma_minus{};
    std::array<double, kReservoirs> coupling{};
    std::array<double, kReservoirs> lambda{};
    std::array<double, kReservoirs> phi{};
};
Couplings couplings(const MachineParams& p);

struct Hamiltonians {
    CMatrix system;                               // 3×3
    std::array<CMatrix, kReservoirs> unit;        // 2×2 each, (B_i/2)σ_z
    std::array<CMatrix, kReservoirs> interaction; // 24×24, includes 1/√τ
    CMatrix free;                                 // H_S + Σ H_R on the joint space
    CMatrix total;                                // free + Σ interaction
};

// Joint space ordering: system ⊗ unit1 ⊗ unit2 ⊗ unit3. Unit basis is the σ_z
// eigenbasis (|e>, |g>), σ = (σ_x − iσ_y)/2 = |g><e|.
Hamiltonians hamiltonians(const MachineParams& p);
Hamiltonians hamiltonians(const Couplings& c, double tau);

CMatrix system_hamiltonian(double B1, double B2);

// Embeds a 3×3 system operator or a 2×2 operator of unit i in the joint space.
CMatrix embed_system(const CMatrix& op);
CMatrix embed_unit(const CMatrix& op, std::size_t i);

namespace pauli {
CMatrix x();
CMatrix y();
CMatrix z();
CMatrix lowering(); // |g><e|
} // namespace pauli

// Reservoir unit state: Gibbs state of (B_i/2)σ_z plus λ_i√τ(cos φ_i σ_x + sin φ_i σ_y).
struct ReservoirUnitState {
    std::size_t index = 0;
    CMatrix rho; // 2×2
    double excited_population = 0.0;
    double max_amplitude = 0.0; // sqrt(p_e·p_g): largest admissible λ√τ
};

// Throws ParameterError if λ_i√τ exceeds sqrt(p_e p_g); the message carries the
// maximal admissible amplitude.
ReservoirUnitState reservoir_unit_state(const MachineParams& p, std::size_t i);

// Sets a named parameter (B1, B2, B3, T1..3, gamma1..3, lambda1..3, phi1..3, tau).
// Setting B3 moves B2 to B1 + B3. Throws ParameterError on an unknown name.
void set_parameter(MachineParams& p, const std::string& name, double value);
double get_parameter(const MachineParams& p, const std::string& name);
bool is_parameter_name(const std::string& name);

} // namespace qtm
