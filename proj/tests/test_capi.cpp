#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "tfres/tfres.h"

namespace {

std::string take(char* text) {
    std::string out = text ? text : "";
    tfres_string_free(text);
    return out;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
    EXPECT_NE(std::strlen(tfres_version()), 0u);
    EXPECT_STREQ(tfres_status_name(TFRES_OK), "ok");
    EXPECT_STREQ(tfres_status_name(TFRES_ERR_RESOURCE), "resource");
}

TEST(CApi, ErrorsSetStatusAndMessage) {
    tfres_state* s = nullptr;
    EXPECT_EQ(tfres_state_reference(TFRES_STATE_OMEGA, 4, 0, &s), TFRES_ERR_DOMAIN);
    EXPECT_EQ(s, nullptr);
    EXPECT_NE(std::string(tfres_last_error()).find("odd"), std::string::npos);
    EXPECT_EQ(tfres_state_reference(TFRES_STATE_W, 5, 0, nullptr), TFRES_ERR_USAGE);
}

TEST(CApi, StateRoundTripAndExpectation) {
    const double amps[] = {1.0 / std::sqrt(2.0), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0 / std::sqrt(2.0)};
    tfres_state* s = nullptr;
    ASSERT_EQ(tfres_state_from_amplitudes(2, amps, 8, &s), TFRES_OK);
    EXPECT_EQ(tfres_state_n_sites(s), 2);
    double zz = 0.0;
    ASSERT_EQ(tfres_state_expect_pauli(s, "ZZ", &zz), TFRES_OK);
    EXPECT_NEAR(zz, 1.0, 1e-15);
    double back[8];
    ASSERT_EQ(tfres_state_amplitudes(s, back, 8), TFRES_OK);
    EXPECT_EQ(back[7], amps[7]);
    EXPECT_EQ(tfres_state_amplitudes(s, back, 6), TFRES_ERR_CONTRACT);
    double m2 = 1.0;
    ASSERT_EQ(tfres_sre(s, 2, &m2), TFRES_OK);
    EXPECT_NEAR(m2, 0.0, 1e-12);
    tfres_state_free(s);
}

TEST(CApi, WStateMagicMatchesOracle) {
    tfres_state* w = nullptr;
    ASSERT_EQ(tfres_state_reference(TFRES_STATE_W, 7, 2, &w), TFRES_OK);
    double fast = 0.0;
    double naive = 0.0;
    double want = 0.0;
    ASSERT_EQ(tfres_sre(w, 2, &fast), TFRES_OK);
    ASSERT_EQ(tfres_sre_naive(w, 2, &naive), TFRES_OK);
    ASSERT_EQ(tfres_w_sre_oracle(7, 2, &want), TFRES_OK);
    EXPECT_NEAR(fast, want, 1e-12);
    EXPECT_NEAR(naive, want, 1e-10);

    tfres_circuit* c = nullptr;
    tfres_state* mapped = nullptr;
    tfres_state* omega = nullptr;
    ASSERT_EQ(tfres_circuit_clifford_map(7, &c), TFRES_OK);
    ASSERT_EQ(tfres_circuit_apply(c, w, &mapped), TFRES_OK);
    ASSERT_EQ(tfres_state_reference(TFRES_STATE_OMEGA, 7, 2, &omega), TFRES_OK);
    double re = 0.0;
    double im = 0.0;
    ASSERT_EQ(tfres_state_inner(mapped, omega, &re, &im), TFRES_OK);
    EXPECT_NEAR(std::hypot(re, im), 1.0, 1e-12);
    tfres_state_free(omega);
    tfres_state_free(mapped);
    tfres_circuit_free(c);
    tfres_state_free(w);
}

TEST(CApi, GroundMultipletOfFrustratedRing) {
    const tfres_model_params p{9, 1.0, 0.5, 0.1, 0.05, 1};
    tfres_model* m = nullptr;
    ASSERT_EQ(tfres_model_create(&p, &m), TFRES_OK);
    EXPECT_EQ(tfres_model_is_frustrated(m), 1);
    tfres_bundle* b = nullptr;
    ASSERT_EQ(tfres_ground_multiplet(m, nullptr, &b), TFRES_OK);
    EXPECT_EQ(tfres_bundle_size(b), 2u);
    int ell = 0;
    int parity = 0;
    ASSERT_EQ(tfres_bundle_sector(b, 0, &ell, &parity), TFRES_OK);
    EXPECT_EQ(std::abs(ell), 2);
    double value = 0.0;
    int mult = 0;
    ASSERT_EQ(tfres_ground_sre(m, 2, nullptr, &value, &ell, &mult), TFRES_OK);
    EXPECT_EQ(mult, 2);
    EXPECT_GT(value, 0.0);
    EXPECT_EQ(tfres_bundle_energy(b, 5, &value), TFRES_ERR_USAGE);
    tfres_bundle_free(b);
    tfres_model_free(m);
}

TEST(CApi, ResourceCapIsReported) {
    const tfres_model_params p{12, 1.0, 0.0, 0.0, 0.0, 1};
    tfres_model* m = nullptr;
    ASSERT_EQ(tfres_model_create(&p, &m), TFRES_OK);
    tfres_solver_options opts;
    tfres_solver_options_default(&opts);
    opts.lanczos_max_sites = 11;
    tfres_bundle* b = nullptr;
    EXPECT_EQ(tfres_solve_lowest(m, 2, &opts, &b), TFRES_ERR_RESOURCE);
    tfres_model_free(m);
}

TEST(CApi, TransitionNotFound) {
    const tfres_model_params family{7, 1.0, 0.25, -0.1, 0.0, 1};
    double hstar = 0.0;
    EXPECT_EQ(tfres_detect_transition(&family, 0.0, 0.2, 1e-2, nullptr, &hstar), TFRES_ERR_NOT_FOUND);
    ASSERT_EQ(tfres_detect_transition(&family, 0.0, 1.0, 1e-3, nullptr, &hstar), TFRES_OK);
    tfres_sre_jump_result jump{};
    ASSERT_EQ(tfres_sre_jump(&family, hstar, 1e-2, nullptr, &jump), TFRES_OK);
    EXPECT_GT(jump.jump, 0.0);
}

TEST(CApi, EntropiesAndOracles) {
    tfres_state* g = nullptr;
    ASSERT_EQ(tfres_state_reference(TFRES_STATE_GHZ, 6, 0, &g), TFRES_OK);
    const int sites[] = {1, 2, 3};
    double s = 0.0;
    ASSERT_EQ(tfres_entropy(g, sites, 3, 1.0, &s), TFRES_OK);
    EXPECT_NEAR(s, 1.0, 1e-12);
    tfres_state_free(g);
    int m = 0;
    int l = 0;
    int r = 0;
    ASSERT_EQ(tfres_dee_preset(17, 0, &m, &l, &r), TFRES_OK);
    EXPECT_EQ(m, 8);
    EXPECT_EQ(l, 2);
    EXPECT_EQ(r, 4);
    EXPECT_EQ(tfres_dee_preset(19, 0, &m, &l, &r), TFRES_ERR_DOMAIN);
    double v = 0.0;
    ASSERT_EQ(tfres_tf_entropy_oracle(0.5, &v), TFRES_OK);
    EXPECT_NEAR(v, 2.0, 1e-15);
}

TEST(CApi, SweepFitVerifyPlot) {
    char* out = nullptr;
    size_t failed = 99;
    ASSERT_EQ(tfres_sweep_run("quantity = sre\nstate = w\ngrid.n = 5,7,9\ntimestamp = false\n", &out, &failed),
              TFRES_OK);
    EXPECT_EQ(failed, 0u);
    const std::string csv = take(out);
    EXPECT_EQ(csv.rfind("N,", 0), 0u);

    tfres_power_law fit{};
    ASSERT_EQ(tfres_fit_table(csv.c_str(), "N", "sre_bits", &fit), TFRES_OK);
    EXPECT_EQ(fit.points, 3u);
    EXPECT_EQ(tfres_fit_table(csv.c_str(), "N", "nope", &fit), TFRES_ERR_USAGE);

    const double x[] = {1, 2, 4};
    const double y[] = {2, 1, 0.5};
    ASSERT_EQ(tfres_fit_power_law(x, y, 3, &fit), TFRES_OK);
    EXPECT_NEAR(fit.b, -1.0, 1e-12);

    char* report = nullptr;
    int passed = 0;
    ASSERT_EQ(tfres_verify("clifford", 7, 0, &report, &passed), TFRES_OK);
    EXPECT_EQ(passed, 1);
    take(report);
    EXPECT_EQ(tfres_verify("everything", 7, 0, &report, &passed), TFRES_ERR_USAGE);

    const tfres_axes axes{"N", "sre_bits", nullptr, 0, 0, 0, 0.0, nullptr, "W magic"};
    char* svg = nullptr;
    ASSERT_EQ(tfres_plot(csv.c_str(), &axes, &svg), TFRES_OK);
    EXPECT_NE(take(svg).find("W magic"), std::string::npos);
}

TEST(CApi, SweepRejectsBadPlan) {
    char* out = nullptr;
    EXPECT_EQ(tfres_sweep_run("quantity = sre\nunknown = 3\n", &out, nullptr), TFRES_ERR_USAGE);
    EXPECT_EQ(out, nullptr);
}
