#include "support/oracles.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>

namespace oracle {
namespace {

using C = std::complex<double>;

Eigen::Matrix2cd pauli(char c) {
    Eigen::Matrix2cd m;
    switch (c) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: m.setIdentity();
    }
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

Matrix site_operator(int n_sites, int site, const Eigen::Matrix2cd& op) {
    // Site N is the most significant bit, so it is the leftmost factor.
    Matrix out = Matrix::Identity(1, 1);
    for (int j = n_sites; j >= 1; --j) {
        out = kron(out, j == site ? Matrix(op) : Matrix(Matrix::Identity(2, 2)));
    }
    return out;
}

Matrix pauli_string_matrix(const std::string& text) {
    Matrix out = Matrix::Identity(1, 1);
    for (auto it = text.rbegin(); it != text.rend(); ++it) out = kron(out, Matrix(pauli(*it)));
    return out;
}

Matrix hamiltonian(const tfres::ModelSpec& spec) {
    const int n = spec.n_sites;
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix h = Matrix::Zero(dim, dim);
    const int bonds = spec.boundary == tfres::Boundary::periodic ? n : n - 1;
    const std::pair<char, double> couplings[] = {{'X', spec.jx}, {'Y', spec.jy}, {'Z', spec.jz}};
    for (int b = 1; b <= bonds; ++b) {
        const int next = b % n + 1;
        for (const auto& [axis, j] : couplings) {
            if (j != 0.0) h += j * site_operator(n, b, pauli(axis)) * site_operator(n, next, pauli(axis));
        }
    }
    for (int s = 1; s <= n; ++s) h += spec.h * site_operator(n, s, pauli('Z'));
    return h;
}

Vector to_vector(const tfres::StateVector& state) {
    Vector v(static_cast<Eigen::Index>(state.dim()));
    for (tfres::Index i = 0; i < state.dim(); ++i) v(static_cast<Eigen::Index>(i)) = state[i];
    return v;
}

tfres::StateVector from_vector(int n_sites, const Vector& v) {
    std::vector<tfres::Complex> amps(v.data(), v.data() + v.size());
    return tfres::StateVector(n_sites, std::move(amps));
}

Vector product_state(const std::vector<Eigen::Vector2cd>& sites) {
    Matrix out = Matrix::Identity(1, 1);
    for (auto it = sites.rbegin(); it != sites.rend(); ++it) out = kron(out, Matrix(*it));
    return out.col(0);
}

Vector omega_from_products(int n_sites, int ell) {
    const int n = n_sites;
    const double r = 1.0 / std::sqrt(2.0);
    const Eigen::Vector2cd plus(r, r);
    const Eigen::Vector2cd minus(r, -r);
    Vector psi = Vector::Zero(Eigen::Index{1} << n);
    const double p = 2.0 * M_PI * ell / n;
    for (const auto& base : {minus, plus}) {
        const Eigen::Vector2cd flipped = pauli('Z') * base;
        // Sites 2, 4, ..., N-1 carry the flipped vector before translation.
        std::vector<Eigen::Vector2cd> ref(n, base);
        for (int j = 2; j < n; j += 2) ref[j - 1] = flipped;
        for (int k = 1; k <= n; ++k) {
            std::vector<Eigen::Vector2cd> sites(n);
            for (int j = 1; j <= n; ++j) {
                // T^{k-1} moves the content of site j to site j + k - 1.
                const int src = ((j - k) % n + n) % n + 1;
                sites[j - 1] = ref[src - 1];
            }
            psi += std::polar(1.0, p * k) * product_state(sites);
        }
    }
    return psi / psi.norm();
}

Matrix partial_trace(const tfres::StateVector& state, const std::vector<int>& kept_sites) {
    const int n = state.n_sites();
    const int k = static_cast<int>(kept_sites.size());
    Matrix rho = Matrix::Zero(Eigen::Index{1} << k, Eigen::Index{1} << k);
    std::vector<int> traced;
    for (int s = 1; s <= n; ++s) {
        bool kept = false;
        for (int q : kept_sites) kept = kept || q == s;
        if (!kept) traced.push_back(s);
    }
    auto compose = [&](std::uint64_t a, std::uint64_t b) {
        std::uint64_t idx = 0;
        for (int i = 0; i < k; ++i) idx |= ((a >> i) & 1ULL) << (kept_sites[i] - 1);
        for (std::size_t i = 0; i < traced.size(); ++i) idx |= ((b >> i) & 1ULL) << (traced[i] - 1);
        return idx;
    };
    for (std::uint64_t b = 0; b < (1ULL << traced.size()); ++b) {
        for (std::uint64_t a1 = 0; a1 < (1ULL << k); ++a1) {
            for (std::uint64_t a2 = 0; a2 < (1ULL << k); ++a2) {
                rho(static_cast<Eigen::Index>(a1), static_cast<Eigen::Index>(a2)) +=
                    state[compose(a1, b)] * std::conj(state[compose(a2, b)]);
            }
        }
    }
    return rho;
}

double von_neumann(const Matrix& rho) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    double s = 0.0;
    for (double l : es.eigenvalues()) {
        if (l > 1e-14) s -= l * std::log2(l);
    }
    return s;
}

double renyi(const Matrix& rho, double alpha) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    double tr = 0.0;
    for (double l : es.eigenvalues()) {
        if (l > 1e-14) tr += std::pow(l, alpha);
    }
    return std::log2(tr) / (1.0 - alpha);
}

std::pair<double, int> classical_minimum(const tfres::ModelSpec& spec) {
    const int n = spec.n_sites;
    const int bonds = spec.boundary == tfres::Boundary::periodic ? n : n - 1;
    double best = 1e300;
    int count = 0;
    for (std::uint64_t c = 0; c < (1ULL << n); ++c) {
        double e = 0.0;
        for (int b = 0; b < bonds; ++b) {
            const int s1 = (c >> b) & 1ULL ? -1 : 1;
            const int s2 = (c >> ((b + 1) % n)) & 1ULL ? -1 : 1;
            e += spec.jx * s1 * s2;
        }
        if (e < best - 1e-12) {
            best = e;
            count = 1;
        } else if (std::abs(e - best) <= 1e-12) {
            ++count;
        }
    }
    return {best, count};
}

SparseKinkState::SparseKinkState(int n_sites) : n_(n_sites) {
    // Defect on bond (b, b+1); the pattern alternates and skips one flip there.
    for (int b = 1; b <= n_; ++b) {
        for (int f = 0; f < 2; ++f) {
            std::uint64_t c = 0;
            for (int j = 1; j <= n_; ++j) {
                const std::uint64_t v = static_cast<std::uint64_t>((j + (j > b ? 1 : 0)) % 2) ^ f;
                c |= v << (j - 1);
            }
            configs_.push_back(c);
        }
    }
}

double SparseKinkState::renyi2(const std::vector<int>& sites) const {
    std::uint64_t mx = 0;
    for (int s : sites) mx |= 1ULL << (s - 1);
    const std::uint64_t my = ((1ULL << n_) - 1) ^ mx;
    const double amp2 = 1.0 / static_cast<double>(configs_.size());
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> by_rest;
    for (auto c : configs_) by_rest[c & my].push_back(c & mx);
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> rho;
    for (const auto& [rest, xs] : by_rest) {
        for (auto a : xs) {
            for (auto b : xs) rho[{a, b}] += amp2;
        }
    }
    double purity = 0.0;
    for (const auto& [key, v] : rho) purity += v * v;
    return -std::log2(purity);
}

double SparseKinkState::disconnected(int m, int l, int r) const {
    std::vector<int> a;
    std::vector<int> b;
    for (int s = 1; s <= m; ++s) a.push_back(s);
    for (int s = m - r + 1; s <= m; ++s) b.push_back(s);
    for (int s = m + l + 1; s <= m + l + r; ++s) b.push_back(s);
    std::vector<int> uni = a;
    std::vector<int> inter;
    for (int s : b) {
        if (s > m) uni.push_back(s);
        else inter.push_back(s);
    }
    return renyi2(a) + renyi2(b) - renyi2(uni) - renyi2(inter);
}

double zeta2_by_matrices(const tfres::StateVector& state) {
    const int n = state.n_sites();
    const Vector v = to_vector(state);
    double sum = 0.0;
    std::string text(n, 'I');
    const char letters[] = {'I', 'X', 'Y', 'Z'};
    for (std::uint64_t code = 0; code < (1ULL << (2 * n)); ++code) {
        for (int j = 0; j < n; ++j) text[j] = letters[(code >> (2 * j)) & 3];
        const double e = v.dot(pauli_string_matrix(text) * v).real();
        sum += e * e * e * e;
    }
    return sum / std::ldexp(1.0, n);
}

}  // namespace oracle
