#pragma once

// Reduced density matrices over arbitrary site subsets and the entropies
// built from them. Entropies are in bits.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "core/spin.hpp"

namespace tfres {

class PartitionSpec {
public:
    // Sites are 1-based; duplicates and order are normalized away.
    PartitionSpec(int n_sites, std::vector<int> sites);
    static PartitionSpec contiguous(int n_sites, int first, int length);

    int n_sites() const noexcept { return n_sites_; }
    const std::vector<int>& sites() const noexcept { return sites_; }
    std::size_t size() const noexcept { return sites_.size(); }
    Index mask() const noexcept { return mask_; }
    bool is_full() const noexcept { return static_cast<int>(sites_.size()) == n_sites_; }
    PartitionSpec complement() const;

private:
    int n_sites_;
    std::vector<int> sites_;
    Index mask_ = 0;
};

class ReducedDensityMatrix {
public:
    explicit ReducedDensityMatrix(Eigen::MatrixXcd entries);

    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
    Eigen::Index dim() const noexcept { return entries_.rows(); }
    double trace() const { return entries_.trace().real(); }
    // Tr(rho^2), without diagonalizing.
    double purity() const;
    // Ascending; computed on first use.
    const Eigen::VectorXd& eigenvalues() const;

private:
    Eigen::MatrixXcd entries_;
    mutable std::optional<Eigen::VectorXd> eigenvalues_;
};

// rho_A = M M^dagger with M the amplitudes reshaped to (A bits) x (rest).
ReducedDensityMatrix reduce(const StateVector& state, const PartitionSpec& part);

// Eigenvalues below this floor are dropped before taking logarithms.
inline constexpr double kEigenvalueFloor = 1e-14;

double von_neumann_entropy(const ReducedDensityMatrix& rdm);
double renyi_entropy(const ReducedDensityMatrix& rdm, double alpha);

// Entropy of a pure state's subsystem, reducing over the smaller of the
// subsystem and its complement. alpha == 1 selects von Neumann; the full chain
// and the empty set give 0.
double subsystem_entropy(const StateVector& state, const PartitionSpec& part, double alpha);

// 1 - m log2 m - (1 - m) log2(1 - m)
double tf_entropy_oracle(double m);
// s_nf - m log2 m - (1 - m) log2(1 - m)
double tf_phase_entropy(double s_nf, double m);
double binary_entropy(double p);

// Four-set geometry on a ring: A = sites 1..m; B = B1 u B2 where B1 is the
// last r sites of A, followed by a gap of l sites and B2 of r sites.
struct DisconnectedGeometry {
    int n_sites = 0;
    int m_sites = 0;
    int l_sites = 0;
    int r_sites = 0;
    // Fractions the geometry was requested with (informational).
    double m_frac = 0.0;
    double l_frac = 0.0;
    double r_frac = 0.0;

    static DisconnectedGeometry from_sites(int n_sites, int m, int l, int r);
    // Lengths round(frac * N), halves rounded up.
    static DisconnectedGeometry from_fractions(int n_sites, double m, double l, double r);
    // m = (N-1)/2, l = (N-1)/8, r = (N-1)/4. Exact for N = 1 mod 8; other odd
    // N need allow_rounding (nearest integer, halves up).
    static DisconnectedGeometry preset_quarter(int n_sites, bool allow_rounding);

    PartitionSpec a() const;
    PartitionSpec b() const;
    PartitionSpec a_union_b() const;
    PartitionSpec a_intersect_b() const;
    void validate() const;
};

// S(A) + S(B) - S(A u B) - S(A n B)
double disconnected_entropy(const StateVector& state, const DisconnectedGeometry& geom, double alpha);

// Thermodynamic-limit Renyi-2 disconnected entropy of the zero-momentum kink
// superposition for normalized lengths m and l.
double dee_oracle(double m, double l);

}  // namespace tfres
