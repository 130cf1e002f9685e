#include "core/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "core/error.hpp"

namespace tfres {

PartitionSpec::PartitionSpec(int n_sites, std::vector<int> sites)
    : n_sites_(n_sites), sites_(std::move(sites)) {
    detail::check_sites(n_sites);
    std::sort(sites_.begin(), sites_.end());
    sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
    for (int s : sites_) {
        if (s < 1 || s > n_sites) {
            throw DomainError("site " + std::to_string(s) + " outside chain of " + std::to_string(n_sites));
        }
        mask_ |= Index{1} << (s - 1);
    }
}

PartitionSpec PartitionSpec::contiguous(int n_sites, int first, int length) {
    if (length < 0 || length > n_sites) throw DomainError("block length outside [0, N]");
    std::vector<int> sites;
    for (int i = 0; i < length; ++i) sites.push_back((first - 1 + i) % n_sites + 1);
    return PartitionSpec(n_sites, std::move(sites));
}

PartitionSpec PartitionSpec::complement() const {
    std::vector<int> rest;
    for (int s = 1; s <= n_sites_; ++s) {
        if (!((mask_ >> (s - 1)) & 1U)) rest.push_back(s);
    }
    return PartitionSpec(n_sites_, std::move(rest));
}

ReducedDensityMatrix::ReducedDensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw ContractError("density matrix must be square");
}

double ReducedDensityMatrix::purity() const { return entries_.squaredNorm(); }

const Eigen::VectorXd& ReducedDensityMatrix::eigenvalues() const {
    if (!eigenvalues_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
        eigenvalues_ = solver.eigenvalues();
    }
    return *eigenvalues_;
}

namespace {

// All bit patterns over `mask`, in increasing order of the compressed index.
std::vector<Index> deposit_table(Index mask) {
    std::vector<Index> bits;
    for (Index m = mask; m != 0; m &= m - 1) bits.push_back(m & (~m + 1));
    std::vector<Index> table(Index{1} << bits.size());
    for (Index c = 0; c < table.size(); ++c) {
        Index s = 0;
        for (std::size_t b = 0; b < bits.size(); ++b) {
            if ((c >> b) & 1U) s |= bits[b];
        }
        table[c] = s;
    }
    return table;
}

}  // namespace

ReducedDensityMatrix reduce(const StateVector& state, const PartitionSpec& part) {
    if (part.n_sites() != state.n_sites()) throw ContractError("partition and state sizes differ");
    if (part.size() == 0) throw DomainError("empty subsystem");
    if (part.is_full()) {
        throw DomainError("subsystem is the whole chain; a pure state has zero entropy");
    }
    if (part.size() > 14) throw ResourceError("reduced density matrix over more than 14 sites");
    const auto rows = deposit_table(part.mask());
    const auto cols = deposit_table(detail::full_mask(state.n_sites()) & ~part.mask());
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = state[rows[r] | cols[c]];
        }
    }
    Eigen::MatrixXcd rho(m.rows(), m.rows());
    rho.noalias() = m * m.adjoint();
    return ReducedDensityMatrix(std::move(rho));
}

double von_neumann_entropy(const ReducedDensityMatrix& rdm) {
    double s = 0.0;
    for (double lambda : rdm.eigenvalues()) {
        if (lambda > kEigenvalueFloor) s -= lambda * std::log2(lambda);
    }
    return std::max(0.0, s);
}

double renyi_entropy(const ReducedDensityMatrix& rdm, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("Renyi index must be positive");
    if (alpha == 1.0) throw DomainError("Renyi index 1 is the von Neumann entropy");
    if (alpha == 2.0) return std::max(0.0, -std::log2(rdm.purity()));
    double acc = 0.0;
    for (double lambda : rdm.eigenvalues()) {
        if (lambda > kEigenvalueFloor) acc += std::pow(lambda, alpha);
    }
    return std::max(0.0, std::log2(acc) / (1.0 - alpha));
}

double subsystem_entropy(const StateVector& state, const PartitionSpec& part, double alpha) {
    if (part.size() == 0 || part.is_full()) return 0.0;
    const PartitionSpec other = part.complement();
    const PartitionSpec& smaller = other.size() < part.size() ? other : part;
    const ReducedDensityMatrix rdm = reduce(state, smaller);
    return alpha == 1.0 ? von_neumann_entropy(rdm) : renyi_entropy(rdm, alpha);
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw DomainError("probability outside [0, 1]");
    double s = 0.0;
    if (p > 0.0) s -= p * std::log2(p);
    if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
    return s;
}

double tf_entropy_oracle(double m) {
    if (!(m > 0.0 && m < 1.0)) throw DomainError("partition fraction must be in (0, 1)");
    return 1.0 + binary_entropy(m);
}

double tf_phase_entropy(double s_nf, double m) {
    if (!(s_nf >= 0.0)) throw DomainError("area-law entropy must be non-negative");
    return s_nf + binary_entropy(m);
}

DisconnectedGeometry DisconnectedGeometry::from_sites(int n_sites, int m, int l, int r) {
    DisconnectedGeometry g{n_sites, m, l, r,
                           static_cast<double>(m) / n_sites,
                           static_cast<double>(l) / n_sites,
                           static_cast<double>(r) / n_sites};
    g.validate();
    return g;
}

namespace {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

}  // namespace

DisconnectedGeometry DisconnectedGeometry::from_fractions(int n_sites, double m, double l, double r) {
    DisconnectedGeometry g{n_sites, round_half_up(m * n_sites), round_half_up(l * n_sites),
                           round_half_up(r * n_sites), m, l, r};
    g.validate();
    return g;
}

DisconnectedGeometry DisconnectedGeometry::preset_quarter(int n_sites, bool allow_rounding) {
    if (n_sites % 2 == 0) throw DomainError("the quarter preset needs an odd chain");
    const int base = n_sites - 1;
    if (base % 8 != 0 && !allow_rounding) {
        throw DomainError("N=" + std::to_string(n_sites) +
                          " does not give integer (N-1)/8 and (N-1)/4; allow rounding to proceed");
    }
    DisconnectedGeometry g{n_sites, base / 2, round_half_up(base / 8.0), round_half_up(base / 4.0),
                           0.5, 0.125, 0.25};
    g.validate();
    return g;
}

void DisconnectedGeometry::validate() const {
    detail::check_sites(n_sites);
    if (m_sites < 1 || r_sites < 1 || l_sites < 1) {
        throw DomainError("disconnected geometry needs m, l, r >= 1 site");
    }
    if (r_sites > m_sites) throw DomainError("B1 must fit inside A (r <= m)");
    if (m_sites + l_sites + r_sites >= n_sites) {
        throw DomainError("A u B must leave part of the chain outside (m + l + r < N)");
    }
}

PartitionSpec DisconnectedGeometry::a() const { return PartitionSpec::contiguous(n_sites, 1, m_sites); }

PartitionSpec DisconnectedGeometry::a_intersect_b() const {
    return PartitionSpec::contiguous(n_sites, m_sites - r_sites + 1, r_sites);
}

PartitionSpec DisconnectedGeometry::b() const {
    std::vector<int> sites = a_intersect_b().sites();
    for (int i = 1; i <= r_sites; ++i) sites.push_back(m_sites + l_sites + i);
    return PartitionSpec(n_sites, std::move(sites));
}

PartitionSpec DisconnectedGeometry::a_union_b() const {
    std::vector<int> sites = a().sites();
    for (int i = 1; i <= r_sites; ++i) sites.push_back(m_sites + l_sites + i);
    return PartitionSpec(n_sites, std::move(sites));
}

double disconnected_entropy(const StateVector& state, const DisconnectedGeometry& geom, double alpha) {
    geom.validate();
    if (geom.n_sites != state.n_sites()) throw ContractError("geometry and state sizes differ");
    return subsystem_entropy(state, geom.a(), alpha) + subsystem_entropy(state, geom.b(), alpha) -
           subsystem_entropy(state, geom.a_union_b(), alpha) -
           subsystem_entropy(state, geom.a_intersect_b(), alpha);
}

double dee_oracle(double m, double l) {
    if (!(m > 0.0 && m < 1.0 && l > 0.0 && l < 1.0) || !(l + 1.5 * m < 1.0)) {
        throw DomainError("dee_oracle needs m, l in (0, 1) with l + 3m/2 < 1");
    }
    const double whole = m * m + (1 - m) * (1 - m);
    const double half = (1 - m / 2) * (1 - m / 2) + (m / 2) * (m / 2);
    const double split = l * l + (1 - l - m) * (1 - l - m) + m * m / 2;
    const double joined = l * l + (1 - l - 1.5 * m) * (1 - l - 1.5 * m) + 1.25 * m * m;
    return -(std::log2(whole) - std::log2(half) + std::log2(split) - std::log2(joined));
}

}  // namespace tfres
