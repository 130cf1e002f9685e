#include "core/verify.hpp"

#include <array>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <json.hpp>

#include "core/eigensolver.hpp"
#include "core/entanglement.hpp"
#include "core/error.hpp"
#include "core/magic.hpp"
#include "core/model.hpp"
#include "core/reference_states.hpp"

namespace tfres {
namespace {

class Checks {
public:
    explicit Checks(std::vector<VerifyCheck>& out) : out_(out) {}

    void close(std::string name, double expected, double got, double tol) {
        out_.push_back({std::move(name), expected, got, tol, std::abs(got - expected) <= tol});
    }

private:
    std::vector<VerifyCheck>& out_;
};

std::string tag(std::string_view base, int n, std::optional<int> ell = std::nullopt) {
    std::string s(base);
    s += "_N" + std::to_string(n);
    if (ell) s += "_l" + std::to_string(*ell);
    return s;
}

void oracle_suite(Checks& c, std::mt19937_64& rng) {
    for (int n : {3, 5, 7, 9}) {
        for (int ell : {0, 1}) {
            c.close(tag("w_sre_closed_form", n, ell), w_sre_oracle(n, ell), sre(w_state(n, ell), 2).value, 1e-9);
        }
        c.close(tag("extra_magic_offset", n), extra_magic(n), w_sre_oracle(n, 1) - w_sre_oracle(n, 0), 1e-12);
    }
    c.close("w_sre_N5_l0_value", std::log2(125.0 / 29.0), w_sre_oracle(5, 0), 1e-12);
    c.close("w_sre_N5_l1_value", std::log2(125.0 / 24.0), w_sre_oracle(5, 1), 1e-12);
    c.close("w_sre_N5_l2_equals_l1", w_sre_oracle(5, 1), w_sre_oracle(5, 2), 1e-12);
    c.close("extra_magic_large_N", std::log2(7.0 / 6.0), extra_magic(1000001), 1e-6);

    // Finite chains approach the thermodynamic entropies from below; check
    // the deviation shrinks with N (ratio below one).
    const auto ee_dev = [](int n) {
        const int length = n / 2;
        const double s = subsystem_entropy(omega_state(n, 0), PartitionSpec::contiguous(n, 1, length), 1.0);
        return std::abs(s - tf_entropy_oracle(static_cast<double>(length) / n));
    };
    c.close("ee_omega0_deviation_ratio_N13_over_N7", 0.0, ee_dev(13) / ee_dev(7), 1.0);
    const auto dee_dev = [](int n) {
        const auto geom = DisconnectedGeometry::preset_quarter(n, false);
        return std::abs(disconnected_entropy(omega_state(n, 0), geom, 2.0) - dee_oracle(0.5, 0.125));
    };
    c.close("dee_omega0_deviation_ratio_N17_over_N9", 0.0, dee_dev(17) / dee_dev(9), 1.0);

    for (int n = 2; n <= 8; ++n) c.close(tag("ghz_zero_magic", n), 0.0, sre(ghz_state(n), 2).value, 1e-10);

    const StateVector psi = random_state(6, rng);
    const auto spectrum = pauli_spectrum(psi, {2, 3});
    c.close("purity_sum_rule_N6", 1.0, spectrum.moments.at(1), 1e-9);
    const StateVector phi = random_state(5, rng);
    c.close("fast_vs_naive_zeta2_N5", pauli_spectrum_naive(phi, {2}).moments.at(2),
            pauli_spectrum(phi, {2}).moments.at(2), 1e-10);
}

void clifford_suite(Checks& c, std::mt19937_64& rng) {
    for (int n : {3, 5, 7}) {
        const auto circuit = clifford_map_circuit(n);
        for (int ell = min_momentum_index(n); ell <= max_momentum_index(n); ++ell) {
            const StateVector w = w_state(n, ell);
            const StateVector omega = omega_state(n, ell);
            c.close(tag("clifford_fidelity", n, ell), 1.0, std::abs(inner(omega, apply_circuit(circuit, w))), 1e-10);
            c.close(tag("sre_omega_equals_w", n, ell), sre(w, 2).value, sre(omega, 2).value, 1e-9);
        }
    }
    for (int trial = 0; trial < 4; ++trial) {
        const int n = 6;
        const StateVector psi = random_state(n, rng);
        const auto circuit = random_clifford_circuit(n, 40, rng);
        c.close("random_circuit_invariance_N6_trial" + std::to_string(trial), sre(psi, 2).value,
                sre(apply_circuit(circuit, psi), 2).value, 1e-9);
    }
}

void degeneracy_suite(Checks& c) {
    for (int n : {3, 5, 7, 9}) {
        const ModelSpec spec{n, 1.0, 0.0, 0.0, 0.0, Boundary::periodic};
        const double expected = classical_ground_energy(spec);
        const int dim = 1 << n;
        const auto bundle = solve_lowest(Hamiltonian(spec), std::min(2 * n + 2, dim));
        std::vector<StateVector> ground;
        for (std::size_t i = 0; i < bundle.size(); ++i) {
            if (std::abs(bundle.energies[i] - expected) <= 1e-9) ground.push_back(bundle.states[i]);
        }
        c.close(tag("classical_ground_count", n), 2.0 * n, static_cast<double>(ground.size()), 0.0);
        c.close(tag("classical_ground_energy", n), -n + 2.0, bundle.energies.front(), 1e-9);
        std::vector<StateVector> kinks;
        for (int k = 1; k <= n; ++k) {
            kinks.push_back(kink_state(n, k, KinkFamily::minus));
            kinks.push_back(kink_state(n, k, KinkFamily::plus));
        }
        c.close(tag("kink_span_angle", n), 0.0, max_principal_angle_sine(kinks, ground), 1e-8);
    }
    const ModelSpec even{8, 1.0, 0.0, 0.0, 0.0, Boundary::periodic};
    const auto bundle = solve_lowest(Hamiltonian(even), 4);
    c.close("unfrustrated_even_ring_count_N8", 2.0, static_cast<double>(bundle.degeneracy_groups.front().size()), 0.0);
}

}  // namespace

double max_principal_angle_sine(const std::vector<StateVector>& a, const std::vector<StateVector>& b) {
    if (a.empty() || b.empty()) return 1.0;
    const Eigen::Index dim = static_cast<Eigen::Index>(a.front().dim());
    auto pack = [dim](const std::vector<StateVector>& states) {
        Eigen::MatrixXcd m(dim, static_cast<Eigen::Index>(states.size()));
        for (std::size_t j = 0; j < states.size(); ++j) {
            if (static_cast<Eigen::Index>(states[j].dim()) != dim) throw ContractError("state size mismatch");
            for (Eigen::Index i = 0; i < dim; ++i) m(i, static_cast<Eigen::Index>(j)) = states[j][i];
        }
        return m;
    };
    const Eigen::MatrixXcd qa = pack(a);
    const Eigen::MatrixXcd qb = pack(b);
    // Orthonormalize b so non-orthogonal inputs still give a projector.
    const Eigen::MatrixXcd ob = Eigen::HouseholderQR<Eigen::MatrixXcd>(qb).householderQ() *
                                Eigen::MatrixXcd::Identity(dim, qb.cols());
    const Eigen::MatrixXcd residual = qa - ob * (ob.adjoint() * qa);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(residual);
    return std::min(1.0, svd.singularValues()(0));
}

std::string_view to_string(VerifySuite suite) {
    switch (suite) {
        case VerifySuite::oracles: return "oracles";
        case VerifySuite::clifford: return "clifford";
        case VerifySuite::degeneracy: return "degeneracy";
        case VerifySuite::all: return "all";
    }
    return "?";
}

VerifySuite parse_verify_suite(std::string_view text) {
    for (auto s : {VerifySuite::oracles, VerifySuite::clifford, VerifySuite::degeneracy, VerifySuite::all}) {
        if (to_string(s) == text) return s;
    }
    throw UsageError("unknown verify suite '" + std::string(text) + "'");
}

bool VerifyReport::passed() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

VerifyReport run_verify(VerifySuite suite, std::uint64_t seed) {
    VerifyReport report;
    report.suite = std::string(to_string(suite));
    report.seed = seed;
    std::mt19937_64 rng(seed);
    Checks c(report.checks);
    if (suite == VerifySuite::oracles || suite == VerifySuite::all) oracle_suite(c, rng);
    if (suite == VerifySuite::clifford || suite == VerifySuite::all) clifford_suite(c, rng);
    if (suite == VerifySuite::degeneracy || suite == VerifySuite::all) degeneracy_suite(c);
    return report;
}

std::string to_json(const VerifyReport& report, const std::optional<std::string>& timestamp) {
    nlohmann::ordered_json j;
    j["suite"] = report.suite;
    j["seed"] = report.seed;
    if (timestamp) j["timestamp"] = *timestamp;
    j["passed"] = report.passed();
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name}, {"expected", c.expected}, {"got", c.got}, {"tol", c.tol}, {"pass", c.pass}});
    }
    return j.dump(2) + '\n';
}

}  // namespace tfres
