#include "core/spin.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "core/error.hpp"

namespace tfres {

static_assert(std::endian::native == std::endian::little,
              "TFSV serialization assumes a little-endian host");

namespace detail {

void check_sites(int n_sites) {
    if (n_sites < 1 || n_sites > kMaxSites) {
        throw DomainError("number of sites must be in [1, " + std::to_string(kMaxSites) +
                          "], got " + std::to_string(n_sites));
    }
}

}  // namespace detail

namespace {

inline int parity(Index v) { return std::popcount(v) & 1; }

void check_same_shape(const StateVector& a, const StateVector& b) {
    if (a.n_sites() != b.n_sites()) {
        throw ContractError("state size mismatch: " + std::to_string(a.n_sites()) + " vs " +
                            std::to_string(b.n_sites()) + " sites");
    }
}

void check_mask(const StateVector& state, PauliString p) {
    const Index mask = detail::full_mask(state.n_sites());
    if ((p.x_mask & ~mask) != 0 || (p.z_mask & ~mask) != 0) {
        throw DomainError("Pauli string masks exceed " + std::to_string(state.n_sites()) +
                          " sites");
    }
}

// i^k for k mod 4.
inline Complex i_power(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

StateVector::StateVector(int n_sites) : n_sites_(n_sites) {
    detail::check_sites(n_sites);
    amps_.assign(Index{1} << n_sites, Complex{});
    amps_[0] = 1.0;
}

StateVector::StateVector(int n_sites, std::vector<Complex> amps)
    : n_sites_(n_sites), amps_(std::move(amps)) {
    detail::check_sites(n_sites);
    if (amps_.size() != (Index{1} << n_sites)) {
        throw ContractError("amplitude array of length " + std::to_string(amps_.size()) +
                            " does not match 2^" + std::to_string(n_sites));
    }
}

StateVector StateVector::basis(int n_sites, Index index) {
    StateVector out = zero(n_sites);
    if (index >= out.dim()) throw DomainError("basis index out of range");
    out.amps_[index] = 1.0;
    return out;
}

StateVector StateVector::zero(int n_sites) {
    detail::check_sites(n_sites);
    return StateVector(n_sites, std::vector<Complex>(Index{1} << n_sites));
}

double StateVector::norm_squared() const {
    double acc = 0.0;
    for (const Complex& a : amps_) acc += std::norm(a);
    return acc;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

StateVector& StateVector::normalize() {
    const double n = norm();
    if (!(n > 0.0)) throw DomainError("cannot normalize the zero vector");
    const double inv = 1.0 / n;
    for (Complex& a : amps_) a *= inv;
    return *this;
}

StateVector& StateVector::operator+=(const StateVector& other) {
    check_same_shape(*this, other);
    for (Index s = 0; s < dim(); ++s) amps_[s] += other.amps_[s];
    return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
    check_same_shape(*this, other);
    for (Index s = 0; s < dim(); ++s) amps_[s] -= other.amps_[s];
    return *this;
}

StateVector& StateVector::operator*=(Complex factor) {
    for (Complex& a : amps_) a *= factor;
    return *this;
}

StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
StateVector operator*(Complex factor, StateVector a) { return a *= factor; }

Complex inner(const StateVector& a, const StateVector& b) {
    check_same_shape(a, b);
    Complex acc{};
    for (Index s = 0; s < a.dim(); ++s) acc += std::conj(a[s]) * b[s];
    return acc;
}

double distance(const StateVector& a, const StateVector& b) { return (a - b).norm(); }

StateVector random_state(int n_sites, std::mt19937_64& rng) {
    StateVector out = StateVector::zero(n_sites);
    std::normal_distribution<double> gauss;
    for (Complex& a : out.amps()) a = {gauss(rng), gauss(rng)};
    out.normalize();
    return out;
}

PauliString PauliString::parse(std::string_view text) {
    if (text.size() > static_cast<std::size_t>(kMaxSites)) {
        throw DomainError("Pauli string longer than supported chain length");
    }
    PauliString p;
    for (std::size_t j = 0; j < text.size(); ++j) {
        const Index bit = Index{1} << j;
        switch (text[j]) {
            case 'I': break;
            case 'X': p.x_mask |= bit; break;
            case 'Y': p.x_mask |= bit; p.z_mask |= bit; break;
            case 'Z': p.z_mask |= bit; break;
            default: throw DomainError(std::string("invalid Pauli letter '") + text[j] + "'");
        }
    }
    return p;
}

std::string PauliString::to_string(int n_sites) const {
    std::string out(static_cast<std::size_t>(n_sites), 'I');
    for (int j = 0; j < n_sites; ++j) {
        const bool x = (x_mask >> j) & 1U;
        const bool z = (z_mask >> j) & 1U;
        out[static_cast<std::size_t>(j)] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }
    return out;
}

int min_momentum_index(int n_sites) {
    return n_sites % 2 == 1 ? -(n_sites - 1) / 2 : -n_sites / 2 + 1;
}

int max_momentum_index(int n_sites) {
    return n_sites % 2 == 1 ? (n_sites - 1) / 2 : n_sites / 2;
}

void check_momentum_index(int n_sites, int ell) {
    if (ell < min_momentum_index(n_sites) || ell > max_momentum_index(n_sites)) {
        throw DomainError("momentum index " + std::to_string(ell) + " outside [" +
                          std::to_string(min_momentum_index(n_sites)) + ", " +
                          std::to_string(max_momentum_index(n_sites)) + "] for N=" +
                          std::to_string(n_sites));
    }
}

// P|s> = i^{|x&z|} (-1)^{|z&s|} |s ^ x>
StateVector apply_pauli(const StateVector& state, PauliString p) {
    check_mask(state, p);
    const Complex phase = i_power(std::popcount(p.x_mask & p.z_mask));
    StateVector out = StateVector::zero(state.n_sites());
    for (Index s = 0; s < state.dim(); ++s) {
        const Complex a = parity(p.z_mask & s) ? -state[s] : state[s];
        out[s ^ p.x_mask] = phase * a;
    }
    return out;
}

double expect_pauli(const StateVector& state, PauliString p) {
    check_mask(state, p);
    if (std::abs(state.norm() - 1.0) > 1e-9) {
        throw ContractError("expect_pauli requires a normalized state");
    }
    Complex acc{};
    for (Index s = 0; s < state.dim(); ++s) {
        const Complex term = std::conj(state[s ^ p.x_mask]) * state[s];
        acc += parity(p.z_mask & s) ? -term : term;
    }
    acc *= i_power(std::popcount(p.x_mask & p.z_mask));
    if (std::abs(acc.imag()) > 1e-10) {
        throw ContractError("Pauli expectation has an imaginary part; phase convention broken");
    }
    return acc.real();
}

StateVector translate(const StateVector& state, int shift) {
    const int n = state.n_sites();
    if (shift < 0 || shift >= n) {
        throw DomainError("translation shift must be in [0, N)");
    }
    if (shift == 0) return state;
    const Index mask = detail::full_mask(n);
    StateVector out = StateVector::zero(n);
    for (Index s = 0; s < state.dim(); ++s) {
        const Index t = ((s << shift) | (s >> (n - shift))) & mask;
        out[t] = state[s];
    }
    return out;
}

StateVector global_parity_z(const StateVector& state) {
    StateVector out = state;
    for (Index s = 0; s < out.dim(); ++s) {
        if (parity(s)) out[s] = -out[s];
    }
    return out;
}

StateVector rotate_basis_x(const StateVector& state) {
    StateVector out = state;
    auto amps = out.amps();
    const Index dim = out.dim();
    for (Index half = 1; half < dim; half <<= 1) {
        for (Index block = 0; block < dim; block += 2 * half) {
            for (Index s = block; s < block + half; ++s) {
                const Complex a = amps[s];
                const Complex b = amps[s + half];
                amps[s] = a + b;
                amps[s + half] = a - b;
            }
        }
    }
    out *= std::pow(2.0, -0.5 * out.n_sites());
    return out;
}

namespace {

void check_site(const StateVector& state, int site) {
    if (site < 1 || site > state.n_sites()) {
        throw DomainError("site " + std::to_string(site) + " outside chain of " +
                          std::to_string(state.n_sites()));
    }
}

}  // namespace

void apply_hadamard_inplace(StateVector& state, int site) {
    check_site(state, site);
    const Index bit = Index{1} << (site - 1);
    const double r = 1.0 / std::sqrt(2.0);
    for (Index s = 0; s < state.dim(); ++s) {
        if (s & bit) continue;
        const Complex a = state[s];
        const Complex b = state[s | bit];
        state[s] = r * (a + b);
        state[s | bit] = r * (a - b);
    }
}

void apply_sigma_z_inplace(StateVector& state, int site) {
    check_site(state, site);
    const Index bit = Index{1} << (site - 1);
    for (Index s = 0; s < state.dim(); ++s) {
        if (s & bit) state[s] = -state[s];
    }
}

void apply_sigma_x_inplace(StateVector& state, int site) {
    check_site(state, site);
    const Index bit = Index{1} << (site - 1);
    for (Index s = 0; s < state.dim(); ++s) {
        if (!(s & bit)) std::swap(state[s], state[s | bit]);
    }
}

void write_tfsv(std::ostream& out, const StateVector& state) {
    const char magic[4] = {'T', 'F', 'S', 'V'};
    const std::uint32_t version = kTfsvVersion;
    const auto n = static_cast<std::uint32_t>(state.n_sites());
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    for (const Complex& a : state.amps()) {
        const double pair[2] = {a.real(), a.imag()};
        out.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
    if (!out) throw IoError("failed writing TFSV stream");
}

StateVector read_tfsv(std::istream& in) {
    char magic[4] = {};
    std::uint32_t version = 0;
    std::uint32_t n = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || std::string_view(magic, 4) != "TFSV") throw IoError("not a TFSV stream");
    if (version != kTfsvVersion) {
        throw IoError("unsupported TFSV version " + std::to_string(version));
    }
    if (n < 1 || n > static_cast<std::uint32_t>(kMaxSites)) throw IoError("TFSV header has invalid n_sites");
    std::vector<Complex> amps(Index{1} << n);
    for (Complex& a : amps) {
        double pair[2];
        in.read(reinterpret_cast<char*>(pair), sizeof pair);
        a = {pair[0], pair[1]};
    }
    if (!in) throw IoError("truncated TFSV stream");
    return StateVector(static_cast<int>(n), std::move(amps));
}

void save_tfsv(const std::string& path, const StateVector& state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_tfsv(out, state);
}

StateVector load_tfsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_tfsv(in);
}

std::string to_json(const StateVector& state) {
    nlohmann::json amps = nlohmann::json::array();
    for (const Complex& a : state.amps()) amps.push_back({a.real(), a.imag()});
    return nlohmann::json{{"n_sites", state.n_sites()}, {"amps", std::move(amps)}}.dump();
}

StateVector state_from_json(const std::string& text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        const int n = doc.at("n_sites").get<int>();
        std::vector<Complex> amps;
        for (const auto& pair : doc.at("amps")) {
            amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
        return StateVector(n, std::move(amps));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed state JSON: ") + e.what());
    }
}

}  // namespace tfres
