#pragma once

// Stabilizer Renyi entropies from the full Pauli spectrum.
//
//   zeta_q = 2^-N sum_P <P>^{2q},   M_q = log2(zeta_q) / (1 - q)

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "core/eigensolver.hpp"
#include "core/model.hpp"
#include "core/spin.hpp"

namespace tfres {

inline constexpr int kDefaultSpectrumMaxSites = 14;

enum class SreMethod { fast_transform, naive_enumeration, analytic_oracle };
std::string_view to_string(SreMethod method);

struct PauliSpectrum {
    int n_sites = 0;
    std::map<int, double> moments;  // q -> zeta_q; q = 1 always present
};

struct SreResult {
    int q = 2;
    double value = 0.0;
    SreMethod method = SreMethod::fast_transform;
};

// For every x-mask, f(s) = conj(psi(s ^ x)) psi(s) is Walsh-Hadamard
// transformed over s, giving all z-mask expectations of that x-mask at once.
// O(N 4^N) time, one 2^N scratch buffer per worker.
PauliSpectrum pauli_spectrum(const StateVector& state, const std::vector<int>& q_list,
                             int max_sites = kDefaultSpectrumMaxSites);
// Direct enumeration of all 4^N strings through expect_pauli, O(8^N).
PauliSpectrum pauli_spectrum_naive(const StateVector& state, const std::vector<int>& q_list);

SreResult sre(const StateVector& state, int q, int max_sites = kDefaultSpectrumMaxSites);
SreResult sre_naive(const StateVector& state, int q);
double sre_from_moment(double zeta_q, int q);

// M_2 of the generalized W state at quantized momentum l (closed form).
double w_sre_oracle(int n_sites, int ell);
// M_2 of the generalized W state at arbitrary momentum p (p -> 0 is the limit).
double w_sre_momentum(int n_sites, double p);
// log2((7N - 6) / (6N - 6))
double extra_magic(int n_sites);
// (m_tf - m_nf) / w_sre_oracle(N, l)
double relative_sre_correction(double m_tf, double m_nf, int n_sites, int ell);

struct GroundSre {
    double value = 0.0;       // M_q of the ground multiplet members (they agree)
    double energy = 0.0;
    int multiplicity = 0;
    int momentum_index = 0;   // |l| of the multiplet, 0 for open chains
    std::vector<SymmetrySector> labels;
};

GroundSre ground_state_sre(const ModelSpec& spec, int q = 2, const SolverOptions& options = {},
                           int max_sites = kDefaultSpectrumMaxSites);

struct SreJump {
    double below = 0.0;  // M_2 at h* - delta (momentum pair)
    double above = 0.0;  // M_2 at h* + delta (unique ground state)
    double jump = 0.0;   // below - above
    int momentum_index = 0;
};

// nullopt when the two sides of h* are not a pair / singlet pair of phases.
std::optional<SreJump> sre_jump_at_transition(const ModelSpec& family, double h_star, double delta = 1e-2,
                                              const SolverOptions& options = {});

}  // namespace tfres
