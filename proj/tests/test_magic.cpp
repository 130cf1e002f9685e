#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/magic.hpp"
#include "core/reference_states.hpp"
#include "support/oracles.hpp"

using namespace tfres;

namespace {

StateVector seeded_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_state(n, rng);
}

}  // namespace

TEST(Magic, FastSpectrumMatchesExplicitMatrices) {
    for (int n : {1, 2, 3, 4}) {
        const auto s = seeded_state(n, 30 + static_cast<std::uint64_t>(n));
        const auto spec = pauli_spectrum(s, {2});
        EXPECT_NEAR(spec.moments.at(2), oracle::zeta2_by_matrices(s), 1e-13) << "N=" << n;
        EXPECT_NEAR(spec.moments.at(1), 1.0, 1e-12);
    }
}

TEST(Magic, FastAgreesWithNaiveEnumeration) {
    for (int n = 2; n <= 7; ++n) {
        const auto s = seeded_state(n, 40 + static_cast<std::uint64_t>(n));
        for (int q : {2, 3}) {
            EXPECT_NEAR(sre(s, q).value, sre_naive(s, q).value, 1e-10) << "N=" << n << " q=" << q;
        }
    }
}

TEST(Magic, PurityFromPauliSpectrumIsOne) {
    const auto s = seeded_state(8, 50);
    EXPECT_NEAR(pauli_spectrum(s, {1}).moments.at(1), 1.0, 1e-12);
}

TEST(Magic, StabilizerStatesHaveZeroMagic) {
    for (int n = 2; n <= 10; ++n) EXPECT_LT(std::abs(sre(ghz_state(n), 2).value), 1e-10) << "N=" << n;
    EXPECT_LT(std::abs(sre(neel_state(6), 2).value), 1e-12);
}

TEST(Magic, SingleQubitMagicStateIsAdditive) {
    // Bloch vector (1, 1, 0)/sqrt2 gives zeta_2 = 3/4 per site.
    const double r = 1.0 / std::sqrt(2.0);
    const Eigen::Vector2cd t(r, 0.5 * std::complex<double>(1.0, 1.0));
    for (int n : {1, 3, 5}) {
        const auto s = oracle::from_vector(n, oracle::product_state(std::vector<Eigen::Vector2cd>(n, t)));
        EXPECT_NEAR(sre(s, 2).value, n * std::log2(4.0 / 3.0), 1e-12);
    }
}

TEST(Magic, WStateMatchesClosedForm) {
    for (int n = 3; n <= 9; ++n) {
        for (int ell = min_momentum_index(n); ell <= max_momentum_index(n); ++ell) {
            const double p = 2.0 * M_PI * ell / n;
            if (ell != 0 && std::abs(std::sin(2.0 * p)) < 1e-12) continue;
            EXPECT_NEAR(sre(w_state(n, ell), 2).value, w_sre_oracle(n, ell), 1e-12) << "N=" << n << " l=" << ell;
        }
    }
}

TEST(Magic, OmegaHasSameMagicAsW) {
    for (int n : {3, 5, 7, 9}) {
        for (int ell = min_momentum_index(n); ell <= max_momentum_index(n); ++ell) {
            EXPECT_NEAR(sre(omega_state(n, ell), 2).value, sre(w_state(n, ell), 2).value, 1e-11);
        }
    }
}

TEST(Magic, ZeroMomentumFormulaAndExtraMagic) {
    for (int n : {5, 11, 101}) {
        EXPECT_NEAR(w_sre_oracle(n, 0), 3.0 * std::log2(n) - std::log2(7.0 * n - 6.0), 1e-12);
        EXPECT_NEAR(extra_magic(n), std::log2((7.0 * n - 6.0) / (6.0 * n - 6.0)), 1e-15);
    }
    EXPECT_NEAR(extra_magic(1000000), std::log2(7.0 / 6.0), 1e-6);
    EXPECT_NEAR(w_sre_momentum(7, 0.0), w_sre_oracle(7, 0), 1e-12);
    EXPECT_THROW(extra_magic(1), DomainError);
}

TEST(Magic, CliffordCircuitsPreserveMagic) {
    std::mt19937_64 rng(60);
    const auto s = seeded_state(6, 61);
    const double m = sre(s, 2).value;
    for (int trial = 0; trial < 5; ++trial) {
        const auto c = random_clifford_circuit(6, 40, rng);
        EXPECT_NEAR(sre(apply_circuit(c, s), 2).value, m, 1e-10);
    }
    EXPECT_NEAR(sre(rotate_basis_x(s), 2).value, m, 1e-10);
}

TEST(Magic, GroundMultipletMembersAgree) {
    const ModelSpec spec{9, 1.0, 0.5, 0.1, 0.05, Boundary::periodic};
    const auto g = ground_state_sre(spec);
    EXPECT_EQ(g.multiplicity, 2);
    EXPECT_EQ(g.momentum_index, 2);
    ModelSpec flipped = spec;
    flipped.h = -spec.h;
    EXPECT_NEAR(ground_state_sre(flipped).value, g.value, 1e-9);
}

TEST(Magic, RelativeCorrection) {
    const double w = w_sre_oracle(7, 1);
    EXPECT_NEAR(relative_sre_correction(1.0 + w, 1.0, 7, 1), 1.0, 1e-15);
}

TEST(Magic, JumpNeedsPairToSingletTransition) {
    const ModelSpec family{7, 1.0, 0.25, -0.1, 0.0, Boundary::periodic};
    const auto hstar = detect_transition_h(family, 0.0, 1.0, 1e-3);
    ASSERT_TRUE(hstar.has_value());
    const auto jump = sre_jump_at_transition(family, *hstar);
    ASSERT_TRUE(jump.has_value());
    EXPECT_GT(jump->jump, 0.0);
    EXPECT_NEAR(jump->jump, jump->below - jump->above, 1e-15);
    EXPECT_FALSE(sre_jump_at_transition(family, 0.1).has_value());
}

TEST(Magic, Errors) {
    EXPECT_THROW(sre(seeded_state(6, 1), 2, 5), ResourceError);
    auto s = seeded_state(4, 2);
    s *= 2.0;
    EXPECT_THROW(sre(s, 2), ContractError);
    EXPECT_THROW(sre(ghz_state(3), 1), DomainError);
    EXPECT_THROW(w_sre_oracle(8, 2), DomainError);
    EXPECT_NEAR(sre_from_moment(0.25, 2), 2.0, 1e-15);
}
