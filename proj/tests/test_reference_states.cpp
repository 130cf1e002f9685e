#include <gtest/gtest.h>

#include <random>

#include "core/eigensolver.hpp"
#include "core/error.hpp"
#include "core/reference_states.hpp"
#include "support/oracles.hpp"

using namespace tfres;

namespace {

double overlap(const StateVector& a, const oracle::Vector& b) {
    return std::abs(oracle::to_vector(a).dot(b));
}

oracle::Vector w_from_matrices(int n, int ell) {
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<Eigen::Vector2cd> minus(static_cast<std::size_t>(n), Eigen::Vector2cd(r, -r));
    const oracle::Vector base = oracle::product_state(minus);
    Eigen::Matrix2cd z;
    z << 1, 0, 0, -1;
    oracle::Vector psi = oracle::Vector::Zero(base.size());
    for (int j = 1; j <= n; ++j) {
        psi += std::polar(1.0, 2.0 * M_PI * ell * j / n) * (oracle::site_operator(n, j, z) * base);
    }
    return psi / psi.norm();
}

}  // namespace

TEST(ReferenceStates, OmegaMatchesProductConstruction) {
    for (int n : {3, 5, 7, 9}) {
        for (int ell = min_momentum_index(n); ell <= max_momentum_index(n); ++ell) {
            EXPECT_NEAR(overlap(omega_state(n, ell), oracle::omega_from_products(n, ell)), 1.0, 1e-12)
                << "N=" << n << " l=" << ell;
        }
    }
}

TEST(ReferenceStates, WMatchesMatrixConstruction) {
    for (int n : {3, 4, 5}) {
        for (int ell = min_momentum_index(n); ell <= max_momentum_index(n); ++ell) {
            EXPECT_NEAR(overlap(w_state(n, ell), w_from_matrices(n, ell)), 1.0, 1e-12);
        }
    }
}

TEST(ReferenceStates, OmegaCarriesItsMomentumLabel) {
    for (int ell = -3; ell <= 3; ++ell) {
        const auto s = omega_state(7, ell);
        const auto sector = symmetry_sector(s);
        ASSERT_TRUE(sector.has_value());
        EXPECT_EQ(sector->momentum_index, ell);
    }
}

TEST(ReferenceStates, KinksAreOrthonormalProductStates) {
    const int n = 5;
    std::vector<StateVector> kinks;
    for (int k = 1; k <= n; ++k) {
        kinks.push_back(kink_state(n, k, KinkFamily::minus));
        kinks.push_back(kink_state(n, k, KinkFamily::plus));
    }
    for (std::size_t i = 0; i < kinks.size(); ++i) {
        for (std::size_t j = 0; j < kinks.size(); ++j) {
            EXPECT_NEAR(std::abs(inner(kinks[i], kinks[j])), i == j ? 1.0 : 0.0, 1e-13);
        }
    }
    EXPECT_THROW(kink_state(4, 1, KinkFamily::minus), DomainError);
    EXPECT_THROW(kink_state(5, 6, KinkFamily::minus), DomainError);
}

TEST(ReferenceStates, GhzAndNeel) {
    const auto g = ghz_state(4);
    EXPECT_NEAR(std::abs(g[0]), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(g[15]), 1.0 / std::sqrt(2.0), 1e-15);
    const auto neel = neel_state(4);
    EXPECT_NEAR(expect_pauli(neel, PauliString::parse("ZIII")), 1.0, 1e-15);
    EXPECT_NEAR(expect_pauli(neel, PauliString::parse("IZII")), -1.0, 1e-15);
}

TEST(ReferenceStates, CliffordMapTakesWToOmega) {
    for (int n : {3, 5, 7, 9}) {
        const auto circuit = clifford_map_circuit(n);
        EXPECT_EQ(circuit.count(GateKind::cnot), static_cast<std::size_t>(2 * (n - 1)));
        for (int ell = min_momentum_index(n); ell <= max_momentum_index(n); ++ell) {
            const auto mapped = apply_circuit(circuit, w_state(n, ell));
            EXPECT_NEAR(std::abs(inner(mapped, omega_state(n, ell))), 1.0, 1e-12) << "N=" << n << " l=" << ell;
        }
    }
}

TEST(ReferenceStates, CnotGateMatchesDefinition) {
    // 1 - 2 P^{x-}_c P^{z-}_t with P^{x-} = (1 - X)/2, P^{z-} = (1 - Z)/2.
    const int n = 3;
    Eigen::Matrix2cd x;
    Eigen::Matrix2cd z;
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    const oracle::Matrix id = oracle::Matrix::Identity(8, 8);
    const oracle::Matrix px = 0.5 * (id - oracle::site_operator(n, 1, x));
    const oracle::Matrix pz = 0.5 * (id - oracle::site_operator(n, 3, z));
    const oracle::Matrix gate = id - 2.0 * px * pz;
    std::mt19937_64 rng(5);
    const auto s = random_state(n, rng);
    StateVector t = s;
    apply_gate_inplace(t, Gate::cnot(1, 3));
    EXPECT_LT((oracle::to_vector(t) - gate * oracle::to_vector(s)).norm(), 1e-13);
}

TEST(ReferenceStates, CircuitJsonRoundTrip) {
    std::mt19937_64 rng(9);
    const auto c = random_clifford_circuit(5, 20, rng);
    const auto back = circuit_from_json(to_json(c));
    EXPECT_EQ(back.n_sites, 5);
    EXPECT_EQ(back.gates, c.gates);
    EXPECT_THROW(circuit_from_json("{\"n_sites\": 2, \"gates\": [{\"kind\": \"toffoli\", \"sites\": [1]}]}"),
                 IoError);
}

TEST(ReferenceStates, CircuitSizeMismatch) {
    EXPECT_THROW(apply_circuit(clifford_map_circuit(5), w_state(7, 0)), ContractError);
}
