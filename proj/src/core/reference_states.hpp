#pragma once

// Closed-form states of frustrated rings: classical kinks, their momentum
// superpositions, generalized W states, GHZ and Neel states, and the Clifford
// circuit mapping W states onto kink superpositions.

#include <random>
#include <string>
#include <vector>

#include "core/spin.hpp"

namespace tfres {

enum class KinkFamily { minus, plus };

// Product state in the sigma^x eigenbasis; bit j-1 of minus_mask selects |->
// on site j, a clear bit selects |+>.
StateVector x_basis_product(int n_sites, Index minus_mask);

// T^{k-1} prod_{j=1}^{M} s^z_{2j} |-/+>^{(x)N}, N = 2M + 1.
StateVector kink_state(int n_sites, int k, KinkFamily family);
// (1/sqrt(2N)) sum_k e^{ipk} (|k> + |k'>), p = 2 pi l / N.
StateVector omega_state(int n_sites, int ell);
// (1/sqrt(N)) sum_j e^{ipj} s^z_j |->^{(x)N}.
StateVector w_state(int n_sites, int ell);
StateVector ghz_state(int n_sites);
// |up down up ...> in the sigma^z basis.
StateVector neel_state(int n_sites);

enum class GateKind { hadamard, pauli_z, cnot, parity_z };

struct Gate {
    GateKind kind;
    int first = 0;   // site, or control for cnot (1-based)
    int second = 0;  // target for cnot

    static Gate hadamard(int site) { return {GateKind::hadamard, site, 0}; }
    static Gate pauli_z(int site) { return {GateKind::pauli_z, site, 0}; }
    // exp[i pi/4 (1 - s^x_control)(1 - s^z_target)]
    static Gate cnot(int control, int target) { return {GateKind::cnot, control, target}; }
    static Gate parity_z() { return {GateKind::parity_z, 0, 0}; }
    friend bool operator==(const Gate&, const Gate&) = default;
};

struct CliffordCircuit {
    int n_sites = 0;
    std::vector<Gate> gates;  // gates[0] acts first

    std::size_t count(GateKind kind) const;
};

// The circuit taking |W_p> to |omega_p> (up to a global phase) on an odd ring.
CliffordCircuit clifford_map_circuit(int n_sites);
StateVector apply_circuit(const CliffordCircuit& circuit, const StateVector& state);
void apply_gate_inplace(StateVector& state, const Gate& gate);

CliffordCircuit random_clifford_circuit(int n_sites, int length, std::mt19937_64& rng);

// {"n_sites": N, "gates": [{"kind": "...", "sites": [...]}, ...]}
std::string to_json(const CliffordCircuit& circuit);
CliffordCircuit circuit_from_json(const std::string& text);

}  // namespace tfres
