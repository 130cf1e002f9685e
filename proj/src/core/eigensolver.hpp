#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/spin.hpp"

namespace tfres {

// Orientation of momentum labels: a state with translate(psi, 1) =
// exp(kMomentumSign * i * 2 pi l / N) psi carries label l. With this sign the
// kink superpositions and generalized W states built in reference_states.hpp
// carry the label they were constructed with.
inline constexpr int kMomentumSign = -1;

struct GroundStateBundle {
    ModelSpec spec;
    std::vector<double> energies;  // ascending
    std::vector<StateVector> states;
    std::vector<std::vector<std::size_t>> degeneracy_groups;
    std::vector<std::optional<SymmetrySector>> sector_labels;
    std::vector<double> residuals;
    std::uint64_t seed = 0;
    std::string method;

    std::size_t size() const noexcept { return energies.size(); }
};

struct SolverOptions {
    std::uint64_t seed = 0x5EEDF00DULL;
    int dense_max_sites = 10;    // dense solver at or below, Lanczos above
    int lanczos_max_sites = 20;  // refuse larger chains unless raised
    double tolerance = 1e-10;    // relative residual for locking Ritz pairs
    int max_krylov = 250;
    bool force_lanczos = false;
};

double degeneracy_tolerance(double ground_energy);
std::vector<std::vector<std::size_t>> group_degenerate(const std::vector<double>& energies);

GroundStateBundle solve_lowest(const Hamiltonian& h, int k, const SolverOptions& options = {});

// Lowest Ritz value after each Lanczos step from the seeded start vector,
// without restarts. Non-increasing in exact arithmetic.
std::vector<double> lanczos_ritz_history(const Hamiltonian& h, int steps, std::uint64_t seed);

// Rotates the basis of one degeneracy group into simultaneous eigenvectors of
// translation and global z-parity and attaches the labels. The spanned
// subspace is unchanged.
GroundStateBundle resolve_momentum(GroundStateBundle bundle, std::size_t group);

// Momentum label of a translation eigenvalue.
int momentum_label(Complex translation_eigenvalue, int n_sites);
// Label and parity of a single state; nullopt if it is not a simultaneous
// eigenvector within tol.
std::optional<SymmetrySector> symmetry_sector(const StateVector& state, double tol = 1e-8);

// Ground multiplet: the lowest group, symmetry-resolved when periodic, reduced
// to the states whose Rayleigh energy is within 1e-11 max(1,|E|) of the lowest.
GroundStateBundle ground_multiplet(const Hamiltonian& h, const SolverOptions& options = {},
                                   int k = 4);

// Largest h in [h_lo, h_hi] at which the ground multiplet is a pair with
// nonzero momenta, bracketed to +-resolution (midpoint returned). nullopt when
// the degenerate phase does not end inside the range.
std::optional<double> detect_transition_h(const ModelSpec& family, double h_lo, double h_hi,
                                          double resolution, const SolverOptions& options = {});

// True when the ground multiplet is a +-p pair.
bool in_momentum_pair_phase(const ModelSpec& spec, const SolverOptions& options = {});

std::string bundle_to_json(const GroundStateBundle& bundle);

}  // namespace tfres
