#include "core/reference_states.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "core/error.hpp"

namespace tfres {
namespace {

void require_odd(int n_sites, const char* what) {
    if (n_sites < 1 || n_sites % 2 == 0) {
        throw DomainError(std::string(what) + " needs an odd number of sites, got " +
                          std::to_string(n_sites));
    }
}

double momentum(int n_sites, int ell) { return 2.0 * std::numbers::pi * ell / n_sites; }

// Sites 1, 3, ..., N carry |->, even sites |+>.
Index alternating_minus_mask(int n_sites) {
    Index mask = 0;
    for (int j = 1; j <= n_sites; j += 2) mask |= Index{1} << (j - 1);
    return mask;
}

}  // namespace

StateVector x_basis_product(int n_sites, Index minus_mask) {
    detail::check_sites(n_sites);
    StateVector out = StateVector::zero(n_sites);
    const double amp = std::pow(2.0, -0.5 * n_sites);
    for (Index s = 0; s < out.dim(); ++s) {
        out[s] = (std::popcount(s & minus_mask) & 1) ? -amp : amp;
    }
    return out;
}

StateVector kink_state(int n_sites, int k, KinkFamily family) {
    require_odd(n_sites, "kink state");
    if (k < 1 || k > n_sites) throw DomainError("kink index must be in [1, N]");
    // s^z flips |-> <-> |+>, so the even-site flips on |->^N leave odd sites |->.
    Index mask = alternating_minus_mask(n_sites);
    if (family == KinkFamily::plus) mask ^= detail::full_mask(n_sites);
    const StateVector base = x_basis_product(n_sites, mask);
    return k == 1 ? base : translate(base, k - 1);
}

StateVector omega_state(int n_sites, int ell) {
    require_odd(n_sites, "kink superposition");
    check_momentum_index(n_sites, ell);
    const double p = momentum(n_sites, ell);
    StateVector out = StateVector::zero(n_sites);
    for (int k = 1; k <= n_sites; ++k) {
        const Complex phase = std::polar(1.0, p * k);
        out += phase * kink_state(n_sites, k, KinkFamily::minus);
        out += phase * kink_state(n_sites, k, KinkFamily::plus);
    }
    out *= 1.0 / std::sqrt(2.0 * n_sites);
    return out;
}

StateVector w_state(int n_sites, int ell) {
    detail::check_sites(n_sites);
    check_momentum_index(n_sites, ell);
    const double p = momentum(n_sites, ell);
    const Index all = detail::full_mask(n_sites);
    StateVector out = StateVector::zero(n_sites);
    for (int j = 1; j <= n_sites; ++j) {
        out += std::polar(1.0, p * j) * x_basis_product(n_sites, all ^ (Index{1} << (j - 1)));
    }
    out *= 1.0 / std::sqrt(static_cast<double>(n_sites));
    return out;
}

StateVector ghz_state(int n_sites) {
    StateVector out = StateVector::zero(n_sites);
    out[0] = 1.0 / std::sqrt(2.0);
    out[out.dim() - 1] += 1.0 / std::sqrt(2.0);
    return out;
}

StateVector neel_state(int n_sites) {
    Index s = 0;
    for (int j = 2; j <= n_sites; j += 2) s |= Index{1} << (j - 1);
    return StateVector::basis(n_sites, s);
}

std::size_t CliffordCircuit::count(GateKind kind) const {
    std::size_t c = 0;
    for (const Gate& g : gates) c += g.kind == kind;
    return c;
}

CliffordCircuit clifford_map_circuit(int n_sites) {
    require_odd(n_sites, "W-to-kink circuit");
    const int n = n_sites;
    CliffordCircuit c{n, {}};
    c.gates.push_back(Gate::parity_z());
    // Cascade: C(1,2) acts first so each control sees the updated neighbour.
    for (int j = 1; j <= n - 1; ++j) c.gates.push_back(Gate::cnot(j, j + 1));
    c.gates.push_back(Gate::pauli_z(n));
    c.gates.push_back(Gate::hadamard(n));
    for (int j = 1; j <= n / 2; ++j) c.gates.push_back(Gate::pauli_z(2 * j - 1));
    for (int j = 1; j <= n - 1; ++j) c.gates.push_back(Gate::cnot(n, n - j));
    return c;
}

void apply_gate_inplace(StateVector& state, const Gate& gate) {
    const int n = state.n_sites();
    switch (gate.kind) {
        case GateKind::hadamard: apply_hadamard_inplace(state, gate.first); break;
        case GateKind::pauli_z: apply_sigma_z_inplace(state, gate.first); break;
        case GateKind::parity_z: state = global_parity_z(state); break;
        case GateKind::cnot: {
            const int control = gate.first;
            const int target = gate.second;
            if (control < 1 || control > n || target < 1 || target > n || control == target) {
                throw DomainError("invalid CNOT sites");
            }
            // 1 - 2 P(x=-)_control P(z=down)_target: in the sigma^z basis this
            // flips the control bit whenever the target bit is set.
            const Index cbit = Index{1} << (control - 1);
            const Index tbit = Index{1} << (target - 1);
            for (Index s = 0; s < state.dim(); ++s) {
                if ((s & tbit) && !(s & cbit)) std::swap(state[s], state[s | cbit]);
            }
            break;
        }
    }
}

StateVector apply_circuit(const CliffordCircuit& circuit, const StateVector& state) {
    if (circuit.n_sites != state.n_sites()) {
        throw ContractError("circuit acts on " + std::to_string(circuit.n_sites) +
                            " sites, state has " + std::to_string(state.n_sites()));
    }
    StateVector out = state;
    for (const Gate& g : circuit.gates) apply_gate_inplace(out, g);
    return out;
}

CliffordCircuit random_clifford_circuit(int n_sites, int length, std::mt19937_64& rng) {
    CliffordCircuit c{n_sites, {}};
    std::uniform_int_distribution<int> kind(0, n_sites > 1 ? 3 : 2);
    std::uniform_int_distribution<int> site(1, n_sites);
    for (int i = 0; i < length; ++i) {
        switch (kind(rng)) {
            case 0: c.gates.push_back(Gate::hadamard(site(rng))); break;
            case 1: c.gates.push_back(Gate::pauli_z(site(rng))); break;
            case 2: c.gates.push_back(Gate::parity_z()); break;
            default: {
                const int a = site(rng);
                int b = site(rng);
                while (b == a) b = site(rng);
                c.gates.push_back(Gate::cnot(a, b));
            }
        }
    }
    return c;
}

namespace {

const char* kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::hadamard: return "hadamard";
        case GateKind::pauli_z: return "z";
        case GateKind::cnot: return "cnot";
        case GateKind::parity_z: return "parity_z";
    }
    return "?";
}

}  // namespace

std::string to_json(const CliffordCircuit& circuit) {
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate& g : circuit.gates) {
        nlohmann::json sites = nlohmann::json::array();
        if (g.kind == GateKind::cnot) {
            sites = {g.first, g.second};
        } else if (g.kind != GateKind::parity_z) {
            sites = {g.first};
        }
        gates.push_back({{"kind", kind_name(g.kind)}, {"sites", sites}});
    }
    return nlohmann::json{{"n_sites", circuit.n_sites}, {"gates", gates}}.dump();
}

CliffordCircuit circuit_from_json(const std::string& text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        CliffordCircuit c{doc.at("n_sites").get<int>(), {}};
        for (const auto& g : doc.at("gates")) {
            const auto kind = g.at("kind").get<std::string>();
            const auto& sites = g.at("sites");
            if (kind == "hadamard") {
                c.gates.push_back(Gate::hadamard(sites.at(0).get<int>()));
            } else if (kind == "z") {
                c.gates.push_back(Gate::pauli_z(sites.at(0).get<int>()));
            } else if (kind == "cnot") {
                c.gates.push_back(Gate::cnot(sites.at(0).get<int>(), sites.at(1).get<int>()));
            } else if (kind == "parity_z") {
                c.gates.push_back(Gate::parity_z());
            } else {
                throw IoError("unknown gate kind '" + kind + "'");
            }
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed circuit JSON: ") + e.what());
    }
}

}  // namespace tfres
