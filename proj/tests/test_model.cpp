#include <gtest/gtest.h>

#include <random>

#include "core/error.hpp"
#include "core/model.hpp"
#include "support/oracles.hpp"

using namespace tfres;

namespace {

oracle::Matrix library_matrix(const ModelSpec& spec) {
    const Hamiltonian h(spec);
    const auto dim = static_cast<Eigen::Index>(h.dim());
    oracle::Matrix m(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        const auto col = matvec(h, StateVector::basis(spec.n_sites, static_cast<Index>(c)));
        m.col(c) = oracle::to_vector(col);
    }
    return m;
}

Eigen::VectorXd spectrum(const oracle::Matrix& m) {
    return Eigen::SelfAdjointEigenSolver<oracle::Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

class HamiltonianMatchesKronecker : public ::testing::TestWithParam<ModelSpec> {};

TEST_P(HamiltonianMatchesKronecker, AllMatrixElements) {
    const auto& spec = GetParam();
    const auto diff = (library_matrix(spec) - oracle::hamiltonian(spec)).cwiseAbs().maxCoeff();
    EXPECT_LT(diff, 1e-13);
}

INSTANTIATE_TEST_SUITE_P(
    Specs, HamiltonianMatchesKronecker,
    ::testing::Values(ModelSpec{3, 1.0, 0.0, 0.0, 0.0, Boundary::periodic},
                      ModelSpec{4, 1.0, 0.5, 0.1, 0.3, Boundary::periodic},
                      ModelSpec{5, 1.0, 0.5, 0.1, 0.3, Boundary::open},
                      ModelSpec{5, -1.0, 0.25, -0.1, 0.7, Boundary::periodic},
                      ModelSpec{6, 0.8, -0.6, 0.4, -0.2, Boundary::periodic},
                      ModelSpec{2, 1.0, 1.0, 1.0, 0.5, Boundary::open}));

TEST(Model, EnergyIsRayleighQuotient) {
    const ModelSpec spec{5, 1.0, 0.5, 0.1, 0.2, Boundary::periodic};
    std::mt19937_64 rng(11);
    const auto s = random_state(5, rng);
    const auto v = oracle::to_vector(s);
    EXPECT_NEAR(energy(Hamiltonian(spec), s), v.dot(oracle::hamiltonian(spec) * v).real(), 1e-12);
}

TEST(Model, FrustrationClassification) {
    EXPECT_TRUE((ModelSpec{5, 1.0, 0.5, 0.1, 0.0, Boundary::periodic}).is_topologically_frustrated());
    EXPECT_FALSE((ModelSpec{5, -1.0, 0.5, 0.1, 0.0, Boundary::periodic}).is_topologically_frustrated());
    EXPECT_FALSE((ModelSpec{6, 1.0, 0.5, 0.1, 0.0, Boundary::periodic}).is_topologically_frustrated());
    EXPECT_FALSE((ModelSpec{5, 1.0, 0.5, 0.1, 0.0, Boundary::open}).is_topologically_frustrated());
    // Dominant axis is y here.
    EXPECT_FALSE((ModelSpec{5, 0.2, -1.0, 0.1, 0.0, Boundary::periodic}).is_topologically_frustrated());
    const ModelSpec tie{5, 1.0, -1.0, 0.0, 0.0, Boundary::periodic};
    EXPECT_TRUE(tie.has_dominance_tie());
    EXPECT_TRUE(tie.is_topologically_frustrated());
}

TEST(Model, ClassicalGroundEnergyMatchesEnumeration) {
    for (int n = 3; n <= 10; ++n) {
        for (double jx : {1.0, -1.0}) {
            const ModelSpec spec{n, jx, 0.0, 0.0, 0.0, Boundary::periodic};
            EXPECT_NEAR(classical_ground_energy(spec), oracle::classical_minimum(spec).first, 1e-12)
                << "N=" << n << " jx=" << jx;
        }
    }
    EXPECT_THROW(classical_ground_energy(ModelSpec{5, 1.0, 0.1, 0.0, 0.0, Boundary::periodic}), DomainError);
}

TEST(Model, FieldSignDoesNotChangeSpectrum) {
    const ModelSpec plus{5, 1.0, 0.5, 0.1, 0.37, Boundary::periodic};
    ModelSpec minus = plus;
    minus.h = -plus.h;
    const auto a = spectrum(library_matrix(plus));
    const auto b = spectrum(library_matrix(minus));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Model, SignReversalFlipsCouplingsOnly) {
    const ModelSpec spec{7, 1.0, 0.5, -0.1, 0.3, Boundary::periodic};
    const auto r = spec.sign_reversed();
    EXPECT_EQ(r.jx, -1.0);
    EXPECT_EQ(r.jy, -0.5);
    EXPECT_EQ(r.jz, 0.1);
    EXPECT_EQ(r.h, 0.3);
    EXPECT_EQ(r.n_sites, 7);
}

TEST(Model, ParseKeyValueText) {
    const auto spec = ModelSpec::parse("n = 7\njx = 1\njy = 0.5\njz = 0.1\nh = -0.2\nboundary = open\n");
    EXPECT_EQ(spec, (ModelSpec{7, 1.0, 0.5, 0.1, -0.2, Boundary::open}));
    EXPECT_THROW(ModelSpec::parse("n = 7\nboundary = twisted\n"), UsageError);
}

TEST(Model, RejectsInvalidSpecs) {
    EXPECT_THROW(Hamiltonian(ModelSpec{1, 1.0, 0.0, 0.0, 0.0, Boundary::periodic}), DomainError);
    EXPECT_THROW(Hamiltonian(ModelSpec{4, std::nan(""), 0.0, 0.0, 0.0, Boundary::periodic}), DomainError);
}
