#include "core/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <json.hpp>

#include "core/error.hpp"
#include "core/reference_states.hpp"

namespace tfres {
namespace {

using RealVec = std::vector<double>;

double dot(const RealVec& a, const RealVec& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm(const RealVec& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const RealVec& x, RealVec& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void scale(RealVec& v, double s) {
    for (double& x : v) x *= s;
}

// Classical Gram-Schmidt applied twice.
void orthogonalize(RealVec& v, const std::vector<RealVec>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const RealVec& b : basis) axpy(-dot(b, v), b, v);
    }
}

RealVec random_vector(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    RealVec v(dim);
    for (double& x : v) x = gauss(rng);
    return v;
}

StateVector to_state(int n_sites, const RealVec& v) {
    StateVector out = StateVector::zero(n_sites);
    for (std::size_t s = 0; s < v.size(); ++s) out[s] = v[s];
    return out;
}

double relative_residual(const Hamiltonian& h, const RealVec& v, double theta) {
    RealVec hv(v.size());
    h.apply(v, hv);
    axpy(-theta, v, hv);
    return norm(hv) / std::max(1.0, std::abs(theta));
}

struct EigenPair {
    double value;
    RealVec vector;
    double residual;
};

std::vector<EigenPair> dense_lowest(const Hamiltonian& h, int k) {
    const auto dim = static_cast<Eigen::Index>(h.dim());
    Eigen::MatrixXd m(dim, dim);
    RealVec e(h.dim(), 0.0);
    RealVec col(h.dim());
    for (Eigen::Index j = 0; j < dim; ++j) {
        e[static_cast<std::size_t>(j)] = 1.0;
        h.apply(e, col);
        e[static_cast<std::size_t>(j)] = 0.0;
        m.col(j) = Eigen::Map<const Eigen::VectorXd>(col.data(), dim);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", -1.0);
    std::vector<EigenPair> out;
    for (int i = 0; i < k; ++i) {
        RealVec v(solver.eigenvectors().col(i).data(), solver.eigenvectors().col(i).data() + dim);
        const double theta = solver.eigenvalues()(i);
        out.push_back({theta, v, relative_residual(h, v, theta)});
    }
    return out;
}

struct KrylovRun {
    std::vector<EigenPair> converged;  // contiguous from the bottom of the spectrum
    RealVec restart;                   // lowest Ritz vector when nothing converged
    double best_residual = 0.0;
};

// One Lanczos pass with full reorthogonalization against its own basis and the
// locked vectors. Stops when the lowest `need` Ritz pairs converge, the Krylov
// space is exhausted, or `max_steps` is reached.
KrylovRun lanczos_pass(const Hamiltonian& h, RealVec start, const std::vector<RealVec>& locked,
                       int need, int max_steps, double tol) {
    const std::size_t dim = h.dim();
    std::vector<RealVec> basis;
    std::vector<double> alpha;
    std::vector<double> beta;

    orthogonalize(start, locked);
    double nrm = norm(start);
    if (nrm < 1e-12) throw ConvergenceError("Lanczos start vector lies in the locked space", -1.0);
    scale(start, 1.0 / nrm);
    basis.push_back(std::move(start));

    // A pair can converge early on a start vector that barely overlaps the
    // bottom of the spectrum; insist on a minimal exploration first.
    constexpr int min_steps = 30;
    KrylovRun run;
    RealVec w(dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    auto solve_tridiagonal = [&] {
        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1))
                                  : Eigen::VectorXd();
        tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    };
    auto ritz_vector = [&](Eigen::Index i) {
        RealVec y(dim, 0.0);
        for (std::size_t j = 0; j < basis.size() && j < static_cast<std::size_t>(tri.eigenvectors().rows()); ++j) {
            axpy(tri.eigenvectors()(static_cast<Eigen::Index>(j), i), basis[j], y);
        }
        scale(y, 1.0 / norm(y));
        return y;
    };

    for (int step = 0; step < max_steps; ++step) {
        const RealVec& q = basis.back();
        h.apply(q, w);
        const double a = dot(q, w);
        alpha.push_back(a);
        axpy(-a, q, w);
        if (basis.size() > 1) axpy(-beta.back(), basis[basis.size() - 2], w);
        orthogonalize(w, basis);
        orthogonalize(w, locked);
        const double b = norm(w);

        const bool exhausted = b < 1e-12 * std::max(1.0, std::abs(a)) ||
                               basis.size() + locked.size() >= dim;
        const bool last = exhausted || step + 1 == max_steps;
        if (last || alpha.size() % 5 == 0) {
            solve_tridiagonal();
            const auto m = static_cast<Eigen::Index>(alpha.size());
            int contiguous = 0;
            for (Eigen::Index i = 0; i < m; ++i) {
                const double theta = tri.eigenvalues()(i);
                const double est = exhausted ? 0.0 : std::abs(b * tri.eigenvectors()(m - 1, i));
                if (est > tol * std::max(1.0, std::abs(theta))) break;
                ++contiguous;
            }
            const bool explored = exhausted || m >= std::min(min_steps, max_steps);
            if (explored && (contiguous >= std::min<int>(need, static_cast<int>(m)) || last)) {
                for (int i = 0; i < contiguous; ++i) {
                    const double theta = tri.eigenvalues()(i);
                    RealVec y = ritz_vector(i);
                    orthogonalize(y, locked);
                    scale(y, 1.0 / norm(y));
                    const double res = relative_residual(h, y, theta);
                    if (res > 10.0 * tol) break;
                    run.converged.push_back({theta, std::move(y), res});
                }
                if (!run.converged.empty() || last) {
                    if (run.converged.empty()) {
                        run.restart = ritz_vector(0);
                        run.best_residual = relative_residual(h, run.restart, tri.eigenvalues()(0));
                    }
                    return run;
                }
            }
        }
        if (exhausted) break;
        beta.push_back(b);
        scale(w, 1.0 / b);
        basis.push_back(w);
    }
    return run;
}

std::vector<EigenPair> lanczos_lowest(const Hamiltonian& h, int k, const SolverOptions& options) {
    const std::size_t dim = h.dim();
    std::mt19937_64 rng(options.seed);
    std::vector<RealVec> locked;
    std::vector<EigenPair> pairs;
    const std::size_t mem_cap = std::size_t{1536} * 1024 * 1024 / (8 * dim);
    const int max_runs = 10 * k + 10;
    RealVec restart;
    double best_residual = std::numeric_limits<double>::infinity();

    for (int run_index = 0; run_index < max_runs; ++run_index) {
        const auto room = static_cast<int>(std::min<std::size_t>(
            {static_cast<std::size_t>(options.max_krylov), dim - locked.size(), std::max<std::size_t>(mem_cap, 20)}));
        if (room <= 0) break;
        RealVec start = restart.empty() ? random_vector(dim, rng) : std::move(restart);
        restart.clear();
        const int need = std::max(1, k - static_cast<int>(locked.size()));
        KrylovRun run = lanczos_pass(h, std::move(start), locked, need, room, options.tolerance);
        if (run.converged.empty()) {
            best_residual = std::min(best_residual, run.best_residual);
            restart = std::move(run.restart);
            continue;
        }

        // Completeness: once k pairs are locked, a fresh pass whose lowest
        // value sits above the k-th locked one proves nothing was missed.
        if (static_cast<int>(pairs.size()) >= k) {
            std::vector<double> values;
            for (const auto& p : pairs) values.push_back(p.value);
            std::sort(values.begin(), values.end());
            const double kth = values[static_cast<std::size_t>(k - 1)];
            if (run.converged.front().value > kth + degeneracy_tolerance(values.front())) break;
        }
        for (auto& p : run.converged) {
            locked.push_back(p.vector);
            pairs.push_back(std::move(p));
        }
        if (locked.size() >= dim) break;
    }
    if (static_cast<int>(pairs.size()) < k) {
        throw ConvergenceError("Lanczos did not converge " + std::to_string(k) + " eigenpairs",
                               best_residual);
    }
    std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
    pairs.resize(static_cast<std::size_t>(k));
    return pairs;
}

Complex translation_overlap(const StateVector& v) { return inner(v, translate(v, 1)); }

void fix_phase(StateVector& v) {
    Index best = 0;
    double best_mag = -1.0;
    for (Index s = 0; s < v.dim(); ++s) {
        // Tolerance keeps the choice stable against rounding between runs.
        const double mag = std::abs(v[s]);
        if (mag > best_mag * (1.0 + 1e-9)) {
            best_mag = mag;
            best = s;
        }
    }
    if (best_mag > 0.0) v *= std::conj(v[best]) / best_mag;
}

}  // namespace

double degeneracy_tolerance(double ground_energy) {
    return 1e-8 * std::max(1.0, std::abs(ground_energy));
}

std::vector<std::vector<std::size_t>> group_degenerate(const std::vector<double>& energies) {
    std::vector<std::vector<std::size_t>> groups;
    if (energies.empty()) return groups;
    const double tol = degeneracy_tolerance(energies.front());
    for (std::size_t i = 0; i < energies.size(); ++i) {
        if (groups.empty() || std::abs(energies[i] - energies[groups.back().front()]) > tol) {
            groups.push_back({i});
        } else {
            groups.back().push_back(i);
        }
    }
    return groups;
}

GroundStateBundle solve_lowest(const Hamiltonian& h, int k, const SolverOptions& options) {
    const int n = h.n_sites();
    if (k < 1 || static_cast<Index>(k) > h.dim()) {
        throw DomainError("k must be in [1, 2^N]");
    }
    const bool dense = !options.force_lanczos && n <= options.dense_max_sites;
    if (!dense && n > options.lanczos_max_sites) {
        throw ResourceError("N=" + std::to_string(n) + " exceeds the Lanczos size cap of " +
                            std::to_string(options.lanczos_max_sites));
    }
    const auto pairs = dense ? dense_lowest(h, k) : lanczos_lowest(h, k, options);

    GroundStateBundle bundle;
    bundle.spec = h.spec();
    bundle.seed = options.seed;
    bundle.method = dense ? "dense" : "lanczos";
    for (const auto& p : pairs) {
        bundle.energies.push_back(p.value);
        StateVector state = to_state(n, p.vector);
        fix_phase(state);
        bundle.states.push_back(std::move(state));
        bundle.residuals.push_back(p.residual * std::max(1.0, std::abs(p.value)));
        bundle.sector_labels.emplace_back();
    }
    bundle.degeneracy_groups = group_degenerate(bundle.energies);
    return bundle;
}

std::vector<double> lanczos_ritz_history(const Hamiltonian& h, int steps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RealVec q = random_vector(h.dim(), rng);
    scale(q, 1.0 / norm(q));
    std::vector<RealVec> basis{q};
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> history;
    RealVec w(h.dim());
    for (int step = 0; step < steps; ++step) {
        h.apply(basis.back(), w);
        const double a = dot(basis.back(), w);
        alpha.push_back(a);
        orthogonalize(w, basis);
        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1))
                                  : Eigen::VectorXd();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
        history.push_back(tri.eigenvalues()(0));
        const double b = norm(w);
        if (b < 1e-12) break;
        beta.push_back(b);
        scale(w, 1.0 / b);
        basis.push_back(w);
    }
    return history;
}

int momentum_label(Complex translation_eigenvalue, int n_sites) {
    const double angle = std::arg(translation_eigenvalue);
    auto ell = static_cast<int>(std::lround(angle * n_sites / (2.0 * std::numbers::pi * kMomentumSign)));
    while (ell > max_momentum_index(n_sites)) ell -= n_sites;
    while (ell < min_momentum_index(n_sites)) ell += n_sites;
    return ell;
}

std::optional<SymmetrySector> symmetry_sector(const StateVector& state, double tol) {
    const double nrm2 = state.norm_squared();
    const Complex t = translation_overlap(state) / nrm2;
    const Complex p = inner(state, global_parity_z(state)) / nrm2;
    if (std::abs(t) < 1.0 - tol || std::abs(std::abs(p.real()) - 1.0) > tol) return std::nullopt;
    return SymmetrySector{momentum_label(t, state.n_sites()), p.real() > 0 ? 1 : -1};
}

GroundStateBundle resolve_momentum(GroundStateBundle bundle, std::size_t group) {
    if (bundle.spec.boundary != Boundary::periodic) {
        throw DomainError("momentum resolution needs a periodic chain");
    }
    if (group >= bundle.degeneracy_groups.size()) throw DomainError("no such degeneracy group");
    const auto& members = bundle.degeneracy_groups[group];
    const auto g = static_cast<Eigen::Index>(members.size());

    std::vector<StateVector> t_states;
    std::vector<StateVector> p_states;
    for (std::size_t idx : members) {
        t_states.push_back(translate(bundle.states[idx], 1));
        p_states.push_back(global_parity_z(bundle.states[idx]));
    }
    Eigen::MatrixXcd tm(g, g);
    Eigen::MatrixXcd pm(g, g);
    for (Eigen::Index i = 0; i < g; ++i) {
        for (Eigen::Index j = 0; j < g; ++j) {
            const auto& vi = bundle.states[members[static_cast<std::size_t>(i)]];
            tm(i, j) = inner(vi, t_states[static_cast<std::size_t>(j)]);
            pm(i, j) = inner(vi, p_states[static_cast<std::size_t>(j)]);
        }
    }
    // The group must be an invariant subspace of T.
    for (Eigen::Index j = 0; j < g; ++j) {
        StateVector r = t_states[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < g; ++i) {
            r -= tm(i, j) * bundle.states[members[static_cast<std::size_t>(i)]];
        }
        if (r.norm() > 1e-6) {
            throw ContractError("degeneracy group is not closed under translation; "
                                "request more eigenpairs so the group is complete");
        }
    }
    // Generic Hermitian combination of commuting symmetries: its eigenvectors
    // are simultaneous eigenvectors of T and the parity.
    const Eigen::MatrixXcd herm = 0.5 * (tm + tm.adjoint());
    const Eigen::MatrixXcd anti = Complex(0.0, -0.5) * (tm - tm.adjoint());
    const Eigen::MatrixXcd probe = herm + 0.6180339887 * anti + 0.2718281828 * 0.5 * (pm + pm.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(probe);

    std::vector<StateVector> rotated;
    for (Eigen::Index k = 0; k < g; ++k) {
        StateVector v = StateVector::zero(bundle.spec.n_sites);
        for (Eigen::Index j = 0; j < g; ++j) {
            v += solver.eigenvectors()(j, k) * bundle.states[members[static_cast<std::size_t>(j)]];
        }
        v.normalize();
        fix_phase(v);
        rotated.push_back(std::move(v));
    }
    std::vector<SymmetrySector> labels;
    for (const auto& v : rotated) {
        const auto sector = symmetry_sector(v);
        if (!sector) throw ContractError("symmetry resolution failed to diagonalize translation");
        labels.push_back(*sector);
    }
    std::vector<std::size_t> order(rotated.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(labels[a].momentum_index, labels[a].parity_z) <
               std::pair(labels[b].momentum_index, labels[b].parity_z);
    });
    const Hamiltonian h(bundle.spec);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t idx = members[k];
        bundle.states[idx] = std::move(rotated[order[k]]);
        bundle.sector_labels[idx] = labels[order[k]];
        const double e = energy(h, bundle.states[idx]);
        bundle.residuals[idx] = distance(matvec(h, bundle.states[idx]), e * bundle.states[idx]);
    }
    return bundle;
}

namespace {

// On the classical line H is diagonal in the sigma^x product basis; the lowest
// level is read off the x-configurations instead of a Krylov solve, which
// would need one restart per member of the 2N-fold kink manifold.
GroundStateBundle classical_ground_group(const Hamiltonian& h, const SolverOptions& options) {
    const auto& spec = h.spec();
    std::vector<Index> masks;
    double lowest = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < h.dim(); ++c) {
        double e = 0.0;
        for (const Bond& b : h.bonds()) e += (((c >> b.a) ^ (c >> b.b)) & 1U) ? -spec.jx : spec.jx;
        if (e < lowest - degeneracy_tolerance(e)) {
            lowest = e;
            masks.clear();
        }
        if (std::abs(e - lowest) <= degeneracy_tolerance(lowest)) masks.push_back(c);
    }
    GroundStateBundle out;
    out.spec = spec;
    out.seed = options.seed;
    out.method = "classical";
    for (Index m : masks) {
        out.energies.push_back(lowest);
        out.states.push_back(x_basis_product(spec.n_sites, m));
        out.sector_labels.emplace_back();
        out.residuals.push_back(0.0);
    }
    std::vector<std::size_t> all(out.size());
    std::iota(all.begin(), all.end(), 0);
    out.degeneracy_groups = {all};
    return out;
}

}  // namespace

GroundStateBundle ground_multiplet(const Hamiltonian& h, const SolverOptions& options, int k) {
    const auto dim = static_cast<int>(std::min<Index>(h.dim(), 1 << 20));
    k = std::min(k, dim);
    GroundStateBundle bundle;
    if (h.spec().is_classical_line()) {
        bundle = classical_ground_group(h, options);
    } else {
        bundle = solve_lowest(h, k, options);
        // Grow k until the lowest group is strictly inside the computed window.
        while (bundle.degeneracy_groups.front().size() == bundle.size() && k < dim) {
            k = std::min(2 * k, dim);
            bundle = solve_lowest(h, k, options);
        }
    }
    if (h.spec().boundary == Boundary::periodic) bundle = resolve_momentum(std::move(bundle), 0);

    const auto& members = bundle.degeneracy_groups.front();
    std::vector<double> rayleigh;
    for (std::size_t idx : members) rayleigh.push_back(energy(h, bundle.states[idx]));
    const double lowest = *std::min_element(rayleigh.begin(), rayleigh.end());
    const double window = 1e-11 * std::max(1.0, std::abs(lowest));

    GroundStateBundle out;
    out.spec = bundle.spec;
    out.seed = bundle.seed;
    out.method = bundle.method;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (rayleigh[i] - lowest > window) continue;
        const std::size_t idx = members[i];
        out.energies.push_back(rayleigh[i]);
        out.states.push_back(bundle.states[idx]);
        out.sector_labels.push_back(bundle.sector_labels[idx]);
        out.residuals.push_back(bundle.residuals[idx]);
    }
    std::vector<std::size_t> all(out.size());
    std::iota(all.begin(), all.end(), 0);
    out.degeneracy_groups = {all};
    return out;
}

bool in_momentum_pair_phase(const ModelSpec& spec, const SolverOptions& options) {
    const GroundStateBundle gm = ground_multiplet(Hamiltonian(spec), options);
    if (gm.size() != 2) return false;
    for (const auto& label : gm.sector_labels) {
        if (!label || label->momentum_index == 0) return false;
    }
    return true;
}

std::optional<double> detect_transition_h(const ModelSpec& family, double h_lo, double h_hi,
                                          double resolution, const SolverOptions& options) {
    if (!(h_hi > h_lo) || !(resolution > 0.0)) throw DomainError("invalid field range or resolution");
    if (family.boundary != Boundary::periodic) throw DomainError("transition scan needs a periodic chain");
    auto phase = [&](double h) {
        ModelSpec spec = family;
        spec.h = h;
        return in_momentum_pair_phase(spec, options);
    };
    const double step = std::max(resolution, (h_hi - h_lo) / 40.0);
    const int points = static_cast<int>(std::ceil((h_hi - h_lo) / step - 1e-12)) + 1;
    std::vector<double> grid;
    for (int i = 0; i < points; ++i) grid.push_back(std::min(h_hi, h_lo + i * step));
    std::vector<bool> inside;
    for (double h : grid) inside.push_back(phase(h));

    std::optional<std::size_t> edge;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (inside[i] && !inside[i + 1]) edge = i;
    }
    if (!edge) return std::nullopt;
    double lo = grid[*edge];
    double hi = grid[*edge + 1];
    while (hi - lo > 2.0 * resolution) {
        const double mid = 0.5 * (lo + hi);
        (phase(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::string bundle_to_json(const GroundStateBundle& bundle) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& label : bundle.sector_labels) {
        if (label) {
            labels.push_back({{"momentum_index", label->momentum_index}, {"parity_z", label->parity_z}});
        } else {
            labels.push_back(nullptr);
        }
    }
    const auto& s = bundle.spec;
    nlohmann::json doc = {
        {"spec",
         {{"n", s.n_sites}, {"jx", s.jx}, {"jy", s.jy}, {"jz", s.jz}, {"h", s.h},
          {"boundary", std::string(to_string(s.boundary))},
          {"frustrated", s.is_topologically_frustrated()}}},
        {"energies", bundle.energies},
        {"degeneracy_groups", bundle.degeneracy_groups},
        {"sector_labels", labels},
        {"residuals", bundle.residuals},
        {"seed", bundle.seed},
        {"method", bundle.method},
    };
    return doc.dump(2);
}

}  // namespace tfres
