#pragma once

// Bit-level Hilbert space of an N-qubit chain.
//
// Basis index s encodes site j (1-based) in bit j-1. A clear bit is the
// sigma^z = +1 state |up>, a set bit is |down>.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace tfres {

using Complex = std::complex<double>;
using Index = std::uint64_t;

inline constexpr int kMaxSites = 30;

class StateVector {
public:
    StateVector() = default;
    // |up...up>, i.e. basis index 0.
    explicit StateVector(int n_sites);
    StateVector(int n_sites, std::vector<Complex> amps);

    static StateVector basis(int n_sites, Index index);
    static StateVector zero(int n_sites);

    int n_sites() const noexcept { return n_sites_; }
    Index dim() const noexcept { return amps_.size(); }

    std::span<const Complex> amps() const noexcept { return amps_; }
    std::span<Complex> amps() noexcept { return amps_; }
    const Complex& operator[](Index s) const { return amps_[s]; }
    Complex& operator[](Index s) { return amps_[s]; }

    double norm() const;
    double norm_squared() const;
    // Scales to unit norm; throws DomainError for the zero vector.
    StateVector& normalize();

    StateVector& operator+=(const StateVector& other);
    StateVector& operator-=(const StateVector& other);
    StateVector& operator*=(Complex factor);

private:
    int n_sites_ = 0;
    std::vector<Complex> amps_;
};

StateVector operator+(StateVector a, const StateVector& b);
StateVector operator-(StateVector a, const StateVector& b);
StateVector operator*(Complex factor, StateVector a);

// <a|b>
Complex inner(const StateVector& a, const StateVector& b);
double distance(const StateVector& a, const StateVector& b);

// Haar-like random state (normalized complex Gaussian amplitudes).
StateVector random_state(int n_sites, std::mt19937_64& rng);

// Hermitian N-site Pauli string. A site with both bits set carries sigma^y;
// the global phase i^{|x & z|} is implicit, so P = P^dagger and P^2 = 1.
struct PauliString {
    Index x_mask = 0;
    Index z_mask = 0;

    // Parses "IXYZ..." with the first character on site 1.
    static PauliString parse(std::string_view text);
    std::string to_string(int n_sites) const;
    friend bool operator==(const PauliString&, const PauliString&) = default;
};

struct SymmetrySector {
    int momentum_index = 0;  // l, momentum p = 2 pi l / N
    int parity_z = 1;        // eigenvalue of prod_j sigma^z_j
    friend bool operator==(const SymmetrySector&, const SymmetrySector&) = default;
};

// Momentum range for an N-site ring: l in [-(N-1)/2, (N-1)/2] for odd N and
// [-N/2 + 1, N/2] for even N.
int min_momentum_index(int n_sites);
int max_momentum_index(int n_sites);
void check_momentum_index(int n_sites, int ell);

StateVector apply_pauli(const StateVector& state, PauliString p);
double expect_pauli(const StateVector& state, PauliString p);

// Site j content moves to site ((j + shift - 1) mod N) + 1.
StateVector translate(const StateVector& state, int shift);
StateVector global_parity_z(const StateVector& state);
// Hadamard on every site (maps the sigma^z basis to the sigma^x basis).
StateVector rotate_basis_x(const StateVector& state);

// In-place single-site kernels, site is 1-based.
void apply_hadamard_inplace(StateVector& state, int site);
void apply_sigma_z_inplace(StateVector& state, int site);
void apply_sigma_x_inplace(StateVector& state, int site);

// TFSV binary: "TFSV", u32 version, u32 n_sites, 2^N (re, im) float64 pairs,
// all little-endian.
inline constexpr std::uint32_t kTfsvVersion = 1;
void write_tfsv(std::ostream& out, const StateVector& state);
StateVector read_tfsv(std::istream& in);
void save_tfsv(const std::string& path, const StateVector& state);
StateVector load_tfsv(const std::string& path);

// {"n_sites": N, "amps": [[re, im], ...]}
std::string to_json(const StateVector& state);
StateVector state_from_json(const std::string& text);

namespace detail {
void check_sites(int n_sites);
inline Index full_mask(int n_sites) { return (Index{1} << n_sites) - 1; }
}  // namespace detail

}  // namespace tfres
