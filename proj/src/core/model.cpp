#include "core/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "core/error.hpp"
#include "core/keyvalue.hpp"
#include "core/parallel.hpp"

namespace tfres {

std::string_view to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "open";
}

Boundary parse_boundary(std::string_view text) {
    if (text == "periodic" || text == "pbc") return Boundary::periodic;
    if (text == "open" || text == "obc") return Boundary::open;
    throw UsageError("unknown boundary '" + std::string(text) + "' (periodic|open)");
}

bool ModelSpec::is_topologically_frustrated() const {
    if (boundary != Boundary::periodic || n_sites % 2 == 0) return false;
    const double dominant = std::max({std::abs(jx), std::abs(jy), std::abs(jz)});
    if (dominant == 0.0) return false;
    for (double j : {jx, jy, jz}) {
        if (std::abs(j) == dominant && j > 0.0) return true;
    }
    return false;
}

bool ModelSpec::has_dominance_tie() const {
    const double dominant = std::max({std::abs(jx), std::abs(jy), std::abs(jz)});
    if (dominant == 0.0) return false;
    const int count = (std::abs(jx) == dominant) + (std::abs(jy) == dominant) +
                      (std::abs(jz) == dominant);
    return count > 1;
}

ModelSpec ModelSpec::sign_reversed() const {
    ModelSpec out = *this;
    out.jx = -jx;
    out.jy = -jy;
    out.jz = -jz;
    return out;
}

ModelSpec ModelSpec::parse(std::string_view text) {
    const auto kv = KeyValueFile::parse(text);
    ModelSpec spec;
    spec.n_sites = kv.get_int("n");
    spec.jx = kv.has("jx") ? kv.get_double("jx") : 0.0;
    spec.jy = kv.has("jy") ? kv.get_double("jy") : 0.0;
    spec.jz = kv.has("jz") ? kv.get_double("jz") : 0.0;
    spec.h = kv.has("h") ? kv.get_double("h") : 0.0;
    spec.boundary = parse_boundary(kv.get_or("boundary", "periodic"));
    return spec;
}

ModelSpec ModelSpec::load(const std::string& path) {
    const auto kv = KeyValueFile::load(path);
    std::string text;
    for (const auto& [k, v] : kv.entries) text += k + " = " + v + "\n";
    return parse(text);
}

Hamiltonian::Hamiltonian(const ModelSpec& spec) : spec_(spec) {
    if (spec.n_sites < 2) throw DomainError("the chain needs at least 2 sites");
    detail::check_sites(spec.n_sites);
    for (double v : {spec.jx, spec.jy, spec.jz, spec.h}) {
        if (!std::isfinite(v)) throw DomainError("couplings must be finite");
    }
    const int n = spec.n_sites;
    const int n_bonds = spec.boundary == Boundary::periodic ? n : n - 1;
    for (int i = 0; i < n_bonds; ++i) {
        const Bond bond{i, (i + 1) % n};
        bonds_.push_back(bond);
        bond_masks_.push_back((Index{1} << bond.a) | (Index{1} << bond.b));
    }
}

double Hamiltonian::diagonal(Index s) const {
    double d = 0.0;
    if (spec_.jz != 0.0) {
        for (const Bond& bond : bonds_) {
            const bool parallel = ((s >> bond.a) & 1U) == ((s >> bond.b) & 1U);
            d += parallel ? spec_.jz : -spec_.jz;
        }
    }
    if (spec_.h != 0.0) {
        const int down = std::popcount(s);
        d += spec_.h * (spec_.n_sites - 2 * down);
    }
    return d;
}

// s^x s^x + s^y s^y flips both spins of a bond with amplitude J_x - J_y on a
// parallel pair and J_x + J_y on an antiparallel one.
template <class T>
void Hamiltonian::apply_range(const T* in, T* out, Index begin, Index end) const {
    const double par = spec_.jx - spec_.jy;
    const double anti = spec_.jx + spec_.jy;
    const bool has_flip = par != 0.0 || anti != 0.0;
    for (Index s = begin; s < end; ++s) {
        T acc = diagonal(s) * in[s];
        if (has_flip) {
            for (std::size_t k = 0; k < bonds_.size(); ++k) {
                const Bond& bond = bonds_[k];
                const bool parallel = ((s >> bond.a) & 1U) == ((s >> bond.b) & 1U);
                acc += (parallel ? par : anti) * in[s ^ bond_masks_[k]];
            }
        }
        out[s] = acc;
    }
}

namespace {

template <class T, class F>
void run_chunks(Index dim, F&& body) {
    // Each output row depends only on the input, so any partition is exact.
    const std::size_t chunks = dim >= (Index{1} << 14) ? 64 : 1;
    parallel::for_chunks(chunks, [&](std::size_t c) {
        const auto r = parallel::chunk_range(dim, chunks, c);
        body(r.begin, r.end);
    });
}

}  // namespace

void Hamiltonian::apply(std::span<const double> in, std::span<double> out) const {
    if (in.size() != dim() || out.size() != dim()) {
        throw ContractError("matvec dimension mismatch");
    }
    run_chunks<double>(dim(), [&](Index b, Index e) { apply_range(in.data(), out.data(), b, e); });
}

void Hamiltonian::apply(std::span<const Complex> in, std::span<Complex> out) const {
    if (in.size() != dim() || out.size() != dim()) {
        throw ContractError("matvec dimension mismatch");
    }
    run_chunks<Complex>(dim(), [&](Index b, Index e) { apply_range(in.data(), out.data(), b, e); });
}

Hamiltonian build(const ModelSpec& spec) { return Hamiltonian(spec); }

StateVector matvec(const Hamiltonian& h, const StateVector& state) {
    if (state.n_sites() != h.n_sites()) {
        throw ContractError("state has " + std::to_string(state.n_sites()) +
                            " sites, model has " + std::to_string(h.n_sites()));
    }
    StateVector out = StateVector::zero(state.n_sites());
    h.apply(state.amps(), out.amps());
    return out;
}

double energy(const Hamiltonian& h, const StateVector& state) {
    return inner(state, matvec(h, state)).real();
}

double classical_ground_energy(const ModelSpec& spec) {
    if (!spec.is_classical_line()) {
        throw DomainError("classical ground energy is defined only for J_y = J_z = h = 0");
    }
    if (spec.n_sites < 2) throw DomainError("the chain needs at least 2 sites");
    const double j = std::abs(spec.jx);
    if (spec.boundary == Boundary::open) return -j * (spec.n_sites - 1);
    if (spec.jx > 0.0 && spec.n_sites % 2 == 1) return spec.jx * (-spec.n_sites + 2);
    return -j * spec.n_sites;
}

}  // namespace tfres
