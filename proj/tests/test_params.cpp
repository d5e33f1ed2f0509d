#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "b92/params.hpp"

using namespace b92;

TEST_CASE("qubit constants at the symmetric point nu*R = 1") {
    const QubitConstants q = qubit_constants(0.5, 2);
    CHECK(q.alpha_sq() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(q.beta_sq() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("qubit constants R = 0.1, nu = 1") {
    const QubitConstants q = qubit_constants(0.1, 1);
    CHECK(q.g_nu == doctest::Approx(1.1).epsilon(1e-14));
    CHECK(q.beta_sq() == doctest::Approx(1.0 / 1.1).epsilon(1e-14));
    CHECK(q.alpha_sq() == doctest::Approx(0.1 / 1.1).epsilon(1e-14));
}

TEST_CASE("alpha^2 + beta^2 = 1 over random parameters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> log_r(-10.0, -0.5);
    for (int i = 0; i < 200; ++i) {
        const double r = std::pow(10.0, log_r(rng));
        const std::int64_t nu = 1 + static_cast<std::int64_t>(rng() % 1000);
        const QubitConstants q = qubit_constants(r, nu);
        CHECK(std::abs(q.alpha_sq() + q.beta_sq() - 1.0) <= 1e-15);
        CHECK(std::abs(q.g_nu * (q.alpha_sq() + q.beta_sq()) - q.g_nu) <= 1e-15 * q.g_nu);
    }
}

TEST_CASE("qubit constants reject bad inputs") {
    CHECK_THROWS_AS(qubit_constants(0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(qubit_constants(0.1, -3), std::invalid_argument);
    CHECK_THROWS_AS(qubit_constants(0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(qubit_constants(1.0, 1), std::invalid_argument);
}

TEST_CASE("alpha_nu / beta_nu monotone in nu; G a b nondecreasing below the cap") {
    const double r = 3e-4;
    const std::int64_t cap =
        static_cast<std::int64_t>(-1.0 / (2.0 * std::log1p(-r)));  // ~1666
    double prev_alpha = 0.0, prev_beta = 2.0, prev_gab = 0.0;
    for (std::int64_t nu = 1; nu <= cap; ++nu) {
        const QubitConstants q = qubit_constants(r, nu);
        CHECK(q.alpha_nu >= prev_alpha);
        CHECK(q.beta_nu <= prev_beta);
        const double gab = q.g_nu * q.alpha_nu * q.beta_nu;
        CHECK(gab >= prev_gab * (1.0 - 1e-14));
        prev_alpha = q.alpha_nu;
        prev_beta = q.beta_nu;
        prev_gab = gab;
    }
}

TEST_CASE("window arithmetic: eta*mu = 10000, a = 3.2") {
    // eta = 1 via xi = 0, eta_bob = 1.
    const ProtocolParams params(10000.0, 0.1, 3.2);
    const ChannelParams channel(0.0, 0.0, 1.0, 0.0);
    const PhotonWindow w = make_window(params, channel);
    CHECK(w.nu_i == 9680);
    CHECK(w.nu_f == 10320);
    CHECK(w.d1_lo() == 9680);
    CHECK(w.d1_hi() == 10319);
    CHECK(w.prime_lo() == 9681);
    CHECK(w.prime_hi() == 10320);
    // |lambda^(D1)| = |lambda'| = |lambda| - 1
    CHECK(w.d1_hi() - w.d1_lo() == w.size() - 2);
    CHECK(w.prime_hi() - w.prime_lo() == w.size() - 2);
}

TEST_CASE("a = 0 is rejected (degenerate window)") {
    CHECK_THROWS_AS(ProtocolParams(10000.0, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("reference parameters at l = 0 pass both validity predicates") {
    const ProtocolParams params(std::pow(10.0, 6.59), std::pow(10.0, -0.92), 3.2);
    const ChannelParams channel(0.21, 0.0, 0.045, 1.7e-6);
    const PhotonWindow w = make_window(params, channel);
    CHECK(w.nu_i == 173731);
    CHECK(w.nu_f == 176410);
    CHECK(window_regime_valid(params.reflectivity(), w.nu_f));
}

TEST_CASE("invalid regime (nu_f * R >= 1) is a domain error") {
    const ProtocolParams params(10000.0, 5000.0, 3.2);  // R = 0.5
    const ChannelParams channel(0.0, 0.0, 1.0, 0.0);
    CHECK_THROWS_AS(make_window(params, channel), std::domain_error);
}

TEST_CASE("detector equivalence") {
    SUBCASE("unit efficiencies are the identity transform") {
        const DetectorEquivalence d = detector_equivalence(1.0, 1.0, 0.2);
        CHECK(d.signal_absorber == doctest::Approx(1.0));
        CHECK(d.srp_absorber == doctest::Approx(1.0));
        CHECK(d.effective_reflectivity == doctest::Approx(0.2));
    }
    SUBCASE("common efficiency leaves R unchanged") {
        const DetectorEquivalence d = detector_equivalence(0.5, 0.5, 0.2);
        CHECK(d.srp_absorber == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(d.effective_reflectivity == doctest::Approx(0.2).epsilon(1e-14));
    }
    SUBCASE("asymmetric case") {
        const DetectorEquivalence d = detector_equivalence(1.0, 0.5, 0.2);
        CHECK(d.signal_absorber == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(d.srp_absorber == doctest::Approx(0.9).epsilon(1e-14));
        CHECK(d.effective_reflectivity == doctest::Approx(0.1 / 0.9).epsilon(1e-14));
    }
}

TEST_CASE("Alice nonorthogonality") {
    CHECK(alice_nonorthogonality(1e-12).alpha_tilde_sq == doctest::Approx(1e-12).epsilon(1e-6));
    CHECK(alice_nonorthogonality(50.0).alpha_tilde_sq == doctest::Approx(0.5).epsilon(1e-14));
    // kappa = 10^-0.92
    CHECK(alice_nonorthogonality(std::pow(10.0, -0.92)).alpha_tilde_sq ==
          doctest::Approx(0.1068641558731391).epsilon(1e-12));
    for (double kappa : {1e-6, 1e-3, 0.1, 1.0, 3.0})
        CHECK(alice_nonorthogonality(kappa).alpha_tilde_sq < 0.5);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ProtocolParams(1.0, 2.0, 3.2), std::invalid_argument);   // kappa >= mu
    CHECK_THROWS_AS(ProtocolParams(-1.0, 0.1, 3.2), std::invalid_argument);  // mu <= 0
    CHECK_THROWS_AS(ProtocolParams(10.0, 0.1, 3.2, 1.5), std::invalid_argument);  // t out of range
    CHECK_THROWS_AS(ChannelParams(0.21, -1.0, 0.045, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ChannelParams(0.21, 0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ChannelParams(0.21, 0.0, 0.045, 1.5), std::invalid_argument);
}
