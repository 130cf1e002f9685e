#include "core/magic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/parallel.hpp"

namespace tfres {
namespace {

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void check_normalized(const StateVector& state) {
    if (std::abs(state.norm() - 1.0) > 1e-9) throw ContractError("Pauli spectrum needs a normalized state");
}

std::vector<int> with_unit_moment(std::vector<int> q_list) {
    for (int q : q_list) {
        if (q < 1) throw DomainError("moment order must be >= 1");
    }
    if (std::find(q_list.begin(), q_list.end(), 1) == q_list.end()) q_list.push_back(1);
    std::sort(q_list.begin(), q_list.end());
    q_list.erase(std::unique(q_list.begin(), q_list.end()), q_list.end());
    return q_list;
}

void walsh_hadamard(std::vector<Complex>& f) {
    const std::size_t dim = f.size();
    for (std::size_t half = 1; half < dim; half <<= 1) {
        for (std::size_t block = 0; block < dim; block += 2 * half) {
            for (std::size_t s = block; s < block + half; ++s) {
                const Complex a = f[s];
                const Complex b = f[s + half];
                f[s] = a + b;
                f[s + half] = a - b;
            }
        }
    }
}

// Re(i^k z)
inline double rotate_real(int k, Complex z) {
    switch (k & 3) {
        case 0: return z.real();
        case 1: return -z.imag();
        case 2: return -z.real();
        default: return z.imag();
    }
}

}  // namespace

std::string_view to_string(SreMethod method) {
    switch (method) {
        case SreMethod::fast_transform: return "fast_transform";
        case SreMethod::naive_enumeration: return "naive_enumeration";
        case SreMethod::analytic_oracle: return "analytic_oracle";
    }
    return "?";
}

PauliSpectrum pauli_spectrum(const StateVector& state, const std::vector<int>& q_list, int max_sites) {
    if (state.n_sites() > max_sites) {
        throw ResourceError("Pauli spectrum of N=" + std::to_string(state.n_sites()) +
                            " exceeds the cap of " + std::to_string(max_sites) + " sites");
    }
    check_normalized(state);
    const auto qs = with_unit_moment(q_list);
    const Index dim = state.dim();
    const std::size_t chunks = std::min<Index>(dim, 64);
    std::vector<std::vector<CompensatedSum>> partial(chunks, std::vector<CompensatedSum>(qs.size()));

    parallel::for_chunks(chunks, [&](std::size_t c) {
        const auto range = parallel::chunk_range(dim, chunks, c);
        std::vector<Complex> f(dim);
        auto& sums = partial[c];
        for (Index x = range.begin; x < range.end; ++x) {
            for (Index s = 0; s < dim; ++s) f[s] = std::conj(state[s ^ x]) * state[s];
            walsh_hadamard(f);
            for (Index z = 0; z < dim; ++z) {
                const double e = rotate_real(std::popcount(x & z), f[z]);
                const double e2 = e * e;
                double power = e2;
                int done = 1;
                for (std::size_t i = 0; i < qs.size(); ++i) {
                    for (; done < qs[i]; ++done) power *= e2;
                    sums[i].add(power);
                }
            }
        }
    });

    PauliSpectrum out{state.n_sites(), {}};
    const double norm = std::ldexp(1.0, -state.n_sites());
    for (std::size_t i = 0; i < qs.size(); ++i) {
        CompensatedSum total;
        for (const auto& sums : partial) total.add(sums[i].value());
        out.moments[qs[i]] = total.value() * norm;
    }
    return out;
}

PauliSpectrum pauli_spectrum_naive(const StateVector& state, const std::vector<int>& q_list) {
    const auto qs = with_unit_moment(q_list);
    std::vector<CompensatedSum> sums(qs.size());
    const Index dim = state.dim();
    for (Index x = 0; x < dim; ++x) {
        for (Index z = 0; z < dim; ++z) {
            const double e = expect_pauli(state, PauliString{x, z});
            for (std::size_t i = 0; i < qs.size(); ++i) sums[i].add(std::pow(e * e, qs[i]));
        }
    }
    PauliSpectrum out{state.n_sites(), {}};
    const double norm = std::ldexp(1.0, -state.n_sites());
    for (std::size_t i = 0; i < qs.size(); ++i) out.moments[qs[i]] = sums[i].value() * norm;
    return out;
}

double sre_from_moment(double zeta_q, int q) {
    if (q < 2) throw DomainError("stabilizer Renyi entropy is defined for q >= 2");
    if (!(zeta_q > 0.0)) throw ContractError("non-positive Pauli moment");
    const double value = std::log2(zeta_q) / (1.0 - q);
    // Stabilizer states give zeta_q = 1 up to rounding.
    return value < 0.0 && value > -1e-12 ? 0.0 : value;
}

SreResult sre(const StateVector& state, int q, int max_sites) {
    if (q < 2) throw DomainError("stabilizer Renyi entropy is defined for q >= 2");
    const auto spectrum = pauli_spectrum(state, {q}, max_sites);
    return {q, sre_from_moment(spectrum.moments.at(q), q), SreMethod::fast_transform};
}

SreResult sre_naive(const StateVector& state, int q) {
    if (q < 2) throw DomainError("stabilizer Renyi entropy is defined for q >= 2");
    const auto spectrum = pauli_spectrum_naive(state, {q});
    return {q, sre_from_moment(spectrum.moments.at(q), q), SreMethod::naive_enumeration};
}

double w_sre_momentum(int n_sites, double p) {
    if (n_sites < 1) throw DomainError("W state needs at least one site");
    const double n = n_sites;
    double ratio = 0.0;
    const double s2p = std::sin(2.0 * p);
    if (std::abs(s2p) < 1e-12) {
        // Only p -> 0 has a finite limit: sin((2-4N)p)/sin(2p) -> 1 - 2N.
        if (std::abs(p) > 1e-12) throw DomainError("W-state SRE formula is singular at this momentum");
        ratio = 1.0 - 2.0 * n;
    } else {
        ratio = std::sin((2.0 - 4.0 * n) * p) / s2p;
    }
    const double arg = -(11.0 - 12.0 * n + ratio) / (2.0 * n * n * n);
    if (!(arg > 0.0)) throw DomainError("W-state SRE formula outside its domain");
    return -std::log2(arg);
}

double w_sre_oracle(int n_sites, int ell) {
    if (n_sites < 1) throw DomainError("W state needs at least one site");
    if (n_sites == 1 && ell != 0) throw DomainError("a single site has only zero momentum");
    check_momentum_index(n_sites, ell);
    if (ell == 0) return 3.0 * std::log2(static_cast<double>(n_sites)) - std::log2(7.0 * n_sites - 6.0);
    return w_sre_momentum(n_sites, 2.0 * std::numbers::pi * ell / n_sites);
}

double extra_magic(int n_sites) {
    if (n_sites < 2) throw DomainError("extra magic needs N >= 2");
    return std::log2((7.0 * n_sites - 6.0) / (6.0 * n_sites - 6.0));
}

double relative_sre_correction(double m_tf, double m_nf, int n_sites, int ell) {
    const double denom = w_sre_oracle(n_sites, ell);
    if (!(std::abs(denom) > 1e-14)) throw DomainError("relative SRE correction has a zero denominator");
    return (m_tf - m_nf) / denom;
}

GroundSre ground_state_sre(const ModelSpec& spec, int q, const SolverOptions& options, int max_sites) {
    const GroundStateBundle gm = ground_multiplet(Hamiltonian(spec), options);
    GroundSre out;
    out.multiplicity = static_cast<int>(gm.size());
    out.energy = gm.energies.front();
    for (std::size_t i = 0; i < gm.size(); ++i) {
        const double value = sre(gm.states[i], q, max_sites).value;
        if (i == 0) {
            out.value = value;
        } else if (std::abs(value - out.value) > 1e-8) {
            throw ContractError("ground multiplet members disagree on M_q (" + std::to_string(out.value) +
                                " vs " + std::to_string(value) + ")");
        }
        if (gm.sector_labels[i]) {
            out.labels.push_back(*gm.sector_labels[i]);
            out.momentum_index = std::max(out.momentum_index, std::abs(gm.sector_labels[i]->momentum_index));
        }
    }
    return out;
}

std::optional<SreJump> sre_jump_at_transition(const ModelSpec& family, double h_star, double delta,
                                              const SolverOptions& options) {
    if (!(delta > 0.0)) throw DomainError("field offset must be positive");
    ModelSpec below = family;
    below.h = h_star - delta;
    ModelSpec above = family;
    above.h = h_star + delta;
    const GroundSre lo = ground_state_sre(below, 2, options);
    const GroundSre hi = ground_state_sre(above, 2, options);
    const bool pair_below = lo.multiplicity == 2 && lo.momentum_index != 0;
    const bool singlet_above = hi.multiplicity == 1 && hi.momentum_index == 0;
    if (!pair_below || !singlet_above) return std::nullopt;
    return SreJump{lo.value, hi.value, lo.value - hi.value, lo.momentum_index};
}

}  // namespace tfres
