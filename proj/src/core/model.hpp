#pragma once

// XYZ chain in a transverse field:
//   H = sum_n sum_a J_a s^a_n s^a_{n+1} + h sum_n s^z_n

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/spin.hpp"

namespace tfres {

enum class Boundary { periodic, open };

std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view text);

struct ModelSpec {
    int n_sites = 0;
    double jx = 0.0;
    double jy = 0.0;
    double jz = 0.0;
    double h = 0.0;
    Boundary boundary = Boundary::periodic;

    // Periodic ring, odd N, and the dominant coupling is antiferromagnetic.
    bool is_topologically_frustrated() const;
    // True when two axes share the largest |J|; such specs are classified as
    // frustrated if any dominant axis is antiferromagnetic.
    bool has_dominance_tie() const;
    bool is_classical_line() const { return jy == 0.0 && jz == 0.0 && h == 0.0; }

    // Same N and h with every coupling sign reversed.
    ModelSpec sign_reversed() const;

    // Keys n, jx, jy, jz, h, boundary.
    static ModelSpec parse(std::string_view text);
    static ModelSpec load(const std::string& path);

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct Bond {
    int a = 0;  // 0-based bit of the left site
    int b = 0;  // 0-based bit of the right site
};

class Hamiltonian {
public:
    explicit Hamiltonian(const ModelSpec& spec);

    const ModelSpec& spec() const noexcept { return spec_; }
    const std::vector<Bond>& bonds() const noexcept { return bonds_; }
    int n_sites() const noexcept { return spec_.n_sites; }
    Index dim() const noexcept { return Index{1} << spec_.n_sites; }

    // The operator is real in the sigma^z basis, so the eigensolvers work on
    // real vectors.
    void apply(std::span<const double> in, std::span<double> out) const;
    void apply(std::span<const Complex> in, std::span<Complex> out) const;

    double diagonal(Index s) const;

private:
    template <class T>
    void apply_range(const T* in, T* out, Index begin, Index end) const;

    ModelSpec spec_;
    std::vector<Bond> bonds_;
    std::vector<Index> bond_masks_;
};

Hamiltonian build(const ModelSpec& spec);
StateVector matvec(const Hamiltonian& h, const StateVector& state);
// <state|H|state> for a normalized state.
double energy(const Hamiltonian& h, const StateVector& state);

// Minimum of the classical Ising energy J_x sum s^x s^x; requires J_y = J_z = h = 0.
double classical_ground_energy(const ModelSpec& spec);

}  // namespace tfres
