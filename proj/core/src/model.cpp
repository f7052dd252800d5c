#include "qtm/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qtm/errors.hpp"

namespace qtm {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError(message);
}

std::string index_name(const char* base, std::size_t i) {
    return std::string(base) + std::to_string(i + 1);
}

CMatrix projector(Eigen::Index row, Eigen::Index col) {
    CMatrix m = CMatrix::Zero(kSystemDim, kSystemDim);
    m(row, col) = 1.0;
    return m;
}

} // namespace

void validate(const MachineParams& p) {
    const auto finite = [](double v) { return std::isfinite(v); };
    require(finite(p.B1) && finite(p.B2) && finite(p.tau), "parameters must be finite");
    require(p.B1 > 0.0, "B1 must be positive (0 < B1 < B2)");
    require(p.B2 > p.B1, "B2 must exceed B1 (resonance requires B3 = B2 - B1 > 0)");
    for (std::size_t i = 0; i < kReservoirs; ++i) {
        require(finite(p.T[i]) && finite(p.gamma[i]) && finite(p.lambda[i]) && finite(p.phi[i]),
                "parameters must be finite");
        require(p.T[i] > 0.0, index_name("T", i) + " must be positive");
        require(p.gamma[i] > 0.0, index_name("gamma", i) + " must be positive");
        require(p.lambda[i] >= 0.0, index_name("lambda", i) + " must be non-negative");
        require(p.phi[i] >= 0.0 && p.phi[i] < 2.0 * std::numbers::pi,
                index_name("phi", i) + " must lie in [0, 2π)");
    }
    require(p.T[0] < p.T[1] && p.T[1] < p.T[2], "temperatures must satisfy T1 < T2 < T3");
    require(p.tau > 0.0, "tau must be positive");
}

Transition transition(std::size_t i) {
    switch (i) {
    case 0: return {0, 1};
    case 1: return {0, 2};
    case 2: return {1, 2};
    default: throw std::out_of_range("reservoir index must be 0, 1 or 2");
    }
}

double bose_occupation(double energy, double temperature) {
    return 1.0 / std::expm1(energy / temperature);
}

Rates occupations_and_rates(const MachineParams& p) {
    validate(p);
    Rates r;
    const auto B = p.B();
    for (std::size_t i = 0; i < kReservoirs; ++i) {
        const double n = bose_occupation(B[i], p.T[i]);
        r.nbar[i] = n;
        r.gamma_plus[i] = 2.0 * p.gamma[i] * n;
        r.gamma_minus[i] = 2.0 * p.gamma[i] * (n + 1.0);
        r.coupling[i] = std::sqrt(2.0 * p.gamma[i] * (2.0 * n + 1.0));
    }
    return r;
}

Couplings couplings(const MachineParams& p) {
    const Rates r = occupations_and_rates(p);
    Couplings c;
    c.B = p.B();
    c.gamma_plus = r.gamma_plus;
    c.gamma_minus = r.gamma_minus;
    c.coupling = r.coupling;
    c.lambda = p.lambda;
    c.phi = p.phi;
    return c;
}

namespace pauli {
CMatrix x() {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
CMatrix y() {
    const Complex i(0.0, 1.0);
    CMatrix m(2, 2);
    m << 0.0, -i, i, 0.0;
    return m;
}
CMatrix z() {
    CMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
CMatrix lowering() {
    const Complex i(0.0, 1.0);
    return 0.5 * (x() - i * y());
}
} // namespace pauli

CMatrix system_hamiltonian(double B1, double B2) {
    CMatrix h = CMatrix::Zero(kSystemDim, kSystemDim);
    h(1, 1) = B1;
    h(2, 2) = B2;
    return h;
}

CMatrix embed_system(const CMatrix& op) {
    return linalg::kron(op, CMatrix::Identity(8, 8));
}

CMatrix embed_unit(const CMatrix& op, std::size_t i) {
    const CMatrix id = CMatrix::Identity(kUnitDim, kUnitDim);
    CMatrix units = linalg::kron(linalg::kron(i == 0 ? op : id, i == 1 ? op : id), i == 2 ? op : id);
    return linalg::kron(CMatrix::Identity(kSystemDim, kSystemDim), units);
}

Hamiltonians hamiltonians(const Couplings& c, double tau) {
    if (!(tau > 0.0)) throw ParameterError("tau must be positive");
    Hamiltonians h;
    h.system = system_hamiltonian(c.B[0], c.B[1]);
    h.free = embed_system(h.system);
    const CMatrix lower = pauli::lowering();
    const CMatrix raise = lower.adjoint();
    h.total = h.free;
    for (std::size_t i = 0; i < kReservoirs; ++i) {
        h.unit[i] = 0.5 * c.B[i] * pauli::z();
        h.free += embed_unit(h.unit[i], i);

        // system |hi>→|lo> while the unit is raised, and the reverse
        const auto [lo, hi] = transition(i);
        const CMatrix down = embed_system(projector(lo, hi)) * embed_unit(raise, i);
        h.interaction[i] = (c.coupling[i] / std::sqrt(tau)) * (down + down.adjoint());
    }
    h.total = h.free;
    for (const auto& v : h.interaction) h.total += v;
    return h;
}

Hamiltonians hamiltonians(const MachineParams& p) {
    return hamiltonians(couplings(p), p.tau);
}

ReservoirUnitState reservoir_unit_state(const MachineParams& p, std::size_t i) {
    validate(p);
    const double x = p.B()[i] / p.T[i];
    const double pe = 1.0 / (std::exp(x) + 1.0);
    const double pg = 1.0 / (1.0 + std::exp(-x));
    const double amplitude = p.lambda[i] * std::sqrt(p.tau);
    const double max_amplitude = std::sqrt(pe * pg);

    if (amplitude > max_amplitude) {
        std::ostringstream os;
        os.precision(6);
        os << "reservoir unit " << i + 1 << " state is not positive semidefinite: lambda"
           << i + 1 << "*sqrt(tau) = " << amplitude << " exceeds the maximal admissible "
           << max_amplitude << " (lambda" << i + 1 << " <= " << max_amplitude / std::sqrt(p.tau)
           << " at this tau)";
        throw ParameterError(os.str());
    }

    ReservoirUnitState s;
    s.index = i;
    s.excited_population = pe;
    s.max_amplitude = max_amplitude;
    const Complex phase = std::polar(1.0, p.phi[i]);
    s.rho = CMatrix::Zero(kUnitDim, kUnitDim);
    s.rho(0, 0) = pe;
    s.rho(1, 1) = pg;
    s.rho(0, 1) = amplitude * std::conj(phase);
    s.rho(1, 0) = amplitude * phase;
    return s;
}

bool is_parameter_name(const std::string& name) {
    static const char* names[] = {"B1", "B2", "B3", "T1", "T2", "T3", "gamma1", "gamma2",
                                  "gamma3", "lambda1", "lambda2", "lambda3", "phi1", "phi2",
                                  "phi3", "tau"};
    for (const char* n : names) {
        if (name == n) return true;
    }
    return false;
}

namespace {

double* indexed_field(MachineParams& p, const std::string& name) {
    if (name.size() < 2) return nullptr;
    const char last = name.back();
    if (last < '1' || last > '3') return nullptr;
    const std::size_t i = static_cast<std::size_t>(last - '1');
    const std::string base = name.substr(0, name.size() - 1);
    if (base == "T") return &p.T[i];
    if (base == "gamma") return &p.gamma[i];
    if (base == "lambda") return &p.lambda[i];
    if (base == "phi") return &p.phi[i];
    return nullptr;
}

} // namespace

void set_parameter(MachineParams& p, const std::string& name, double value) {
    if (name == "B1") {
        p.B1 = value;
    } else if (name == "B2") {
        p.B2 = value;
    } else if (name == "B3") {
        p.B2 = p.B1 + value;
    } else if (name == "tau") {
        p.tau = value;
    } else if (double* field = indexed_field(p, name)) {
        *field = value;
    } else {
        throw ParameterError("unknown parameter '" + name + "'");
    }
}

double get_parameter(const MachineParams& p, const std::string& name) {
    if (name == "B1") return p.B1;
    if (name == "B2") return p.B2;
    if (name == "B3") return p.B3();
    if (name == "tau") return p.tau;
    MachineParams copy = p;
    if (double* field = indexed_field(copy, name)) return *field;
    throw ParameterError("unknown parameter '" + name + "'");
}

} // namespace qtm
