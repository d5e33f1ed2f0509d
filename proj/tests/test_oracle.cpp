#include <doctest.h>

#include <cmath>
#include <random>

#include "b92/observables.hpp"
#include "b92/oracle.hpp"
#include "b92/phase_bound.hpp"

using namespace b92;

namespace {

const double kKappaRef = std::pow(10.0, -0.92);

double trace_product(const Mat4& rho, const Mat4& op) {
    double acc = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) acc += rho(r, c) * op(c, r);
    return acc;
}

// Random real symmetric PSD matrix with unit trace.
Mat4 random_density(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat4 a;
    for (double& x : a.e) x = gauss(rng);
    Mat4 rho;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += a(k, r) * a(k, c);
            rho(r, c) = acc;
        }
    const double tr = rho(0, 0) + rho(1, 1) + rho(2, 2) + rho(3, 3);
    for (double& x : rho.e) x /= tr;
    return rho;
}

ErrorDecomposition decompose(const Mat4& rho, const QubitConstants& q) {
    JointQubitState st{q.nu, rho, rho(0, 0) + rho(1, 1) + rho(2, 2) + rho(3, 3)};
    return error_decomposition(st, q);
}

}  // namespace

TEST_CASE("formula route matches the explicit POVM route on random states") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        const double r = std::pow(10.0, -1.0 - 6.0 * (static_cast<double>(rng() % 1000) / 1000.0));
        const std::int64_t nu = 1 + static_cast<std::int64_t>(rng() % 50);
        if (!window_regime_valid(r, nu)) continue;
        const QubitConstants q = qubit_constants(r, nu);
        const Mat4 rho = random_density(rng);
        const ErrorDecomposition d = decompose(rho, q);

        CHECK(std::abs(d.n_s - trace_product(rho, povm_survival(q))) <= 1e-12);
        CHECK(std::abs(d.n_one_x - trace_product(rho, povm_one_x(q))) <= 1e-12);
        CHECK(std::abs(d.n_fil - trace_product(rho, povm_filter(q))) <= 1e-12);
        CHECK(std::abs(d.n_ph - trace_product(rho, povm_phase_error(q))) <= 1e-12);
        CHECK(std::abs(d.n_bit - trace_product(rho, povm_bit_error(q))) <= 1e-12);

        // Matrix form: Z_nu = C_nu^{-1} (n00, n01, n10, n11)^T.
        const Vec4 z = mat_vec(c_inverse(q), {d.n00, d.n01, d.n10, d.n11});
        CHECK(std::abs(z[0] - d.n_s) <= 1e-12);
        CHECK(std::abs(z[1] - d.n_one_x) <= 1e-12);
        CHECK(std::abs(z[2] - d.n_fil) <= 1e-12);
        CHECK(std::abs(z[3] - d.n_ph) <= 1e-12);

        // The rotated basis spans each sector: sector traces agree.
        CHECK(d.m00 + d.m11 == doctest::Approx(d.n00 + d.n11).epsilon(1e-12));
        CHECK(d.m01 + d.m10 == doctest::Approx(d.n01 + d.n10).epsilon(1e-12));
    }
}

TEST_CASE("Bloch inequalities hold on random states") {
    std::mt19937_64 rng(29);
    int tested = 0;
    while (tested < 500) {
        const double r = std::pow(10.0, -1.0 - 4.0 * (static_cast<double>(rng() % 1000) / 1000.0));
        const std::int64_t nu = 1 + static_cast<std::int64_t>(rng() % 20);
        if (!window_regime_valid(r, nu)) continue;
        const QubitConstants q = qubit_constants(r, nu);
        const Mat4 rho = random_density(rng);
        const ErrorDecomposition d = decompose(rho, q);
        const double theta = std::asin(q.alpha_nu);

        const double s0 = d.n00 + d.n11;
        const double s1 = d.n01 + d.n10;
        if (s0 < 1e-9 || s1 < 1e-9) continue;
        ++tested;

        const double theta0 = std::asin(std::sqrt(d.n11 / s0));
        const double phi0_sq = d.m11 / (d.m11 + d.m00);
        double lo = std::sin(theta0 - theta);
        double hi = std::sin(theta0 + theta);
        CHECK(phi0_sq >= lo * lo - 1e-9);
        CHECK(phi0_sq <= hi * hi + 1e-9);

        const double theta1 = std::asin(std::sqrt(d.n01 / s1));
        const double phi1_sq = d.m01 / (d.m01 + d.m10);
        lo = std::sin(theta1 - theta);
        hi = std::sin(theta1 + theta);
        CHECK(phi1_sq >= lo * lo - 1e-9);
        CHECK(phi1_sq <= hi * hi + 1e-9);
    }
}

TEST_CASE("per-nu inequality holds for arbitrary states (single-nu S-B92 fixture included)") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        // nu = 1 is exactly the single-photon protocol case.
        const std::int64_t nu = (i % 3 == 0) ? 1 : 1 + static_cast<std::int64_t>(rng() % 30);
        const double r = 0.3 / static_cast<double>(nu + 1);
        if (!window_regime_valid(r, nu)) continue;
        const QubitConstants q = qubit_constants(r, nu);
        const Mat4 rho = random_density(rng);
        const ErrorDecomposition d = decompose(rho, q);
        const RateVector z{d.n_s, d.n_one_x, d.n_fil, d.n_ph};
        CHECK(per_nu_bound_gap(q, z, d.n_bit) >= -1e-12);
    }
}

TEST_CASE("maximally entangled post-filter state has no errors") {
    // Ideal channel: p = 0 leaves only the (00,11) coherent sector.
    const ProtocolParams params(1e5, kKappaRef, 3.2);
    const ChannelParams channel(0.21, 10.0, 0.045, 0.0);
    const PhotonWindow w = make_window(params, channel);
    const std::int64_t nu = (w.nu_i + w.nu_f) / 2;
    const JointQubitState st = joint_state(params, channel, nu);
    const ErrorDecomposition d = error_decomposition(st, qubit_constants(params.reflectivity(), nu));
    CHECK(d.n_ph == 0.0);
    CHECK(std::abs(d.n_bit) <= 1e-18 * st.weight);
    CHECK(d.n01 == 0.0);
    CHECK(d.n10 == 0.0);
}

TEST_CASE("vacuum signal limit: Bob's state collapses toward |0, nu>") {
    const ProtocolParams params(1e4, 1e-9, 3.2);
    const ChannelParams channel(0.0, 0.0, 1.0, 0.0);
    const PhotonWindow w = make_window(params, channel);
    const std::int64_t nu = (w.nu_i + w.nu_f) / 2;
    const JointQubitState st = joint_state(params, channel, nu);
    CHECK(st.matrix(3, 3) / st.matrix(0, 0) <= 2e-9);  // |1_x| weight vanishes with kappa
}

TEST_CASE("oracle rates reproduce the closed-form observables") {
    const ProtocolParams params(1e5, kKappaRef, 3.2);
    for (double l : {0.0, 20.0, 50.0}) {
        const ChannelParams channel(0.21, l, 0.045, 1.7e-6);
        const PhotonWindow w = make_window(params, channel);
        const Observables obs = analytic_observables(params, channel, w);
        const OracleRates rates = oracle_rates(params, channel, w);

        CHECK(rates.fil_win == doctest::Approx(obs.fil_win).epsilon(1e-10));
        CHECK(rates.bit_win == doctest::Approx(obs.bit_win).epsilon(1e-10));
        CHECK(rates.vac_win == doctest::Approx(obs.vac_win).epsilon(1e-10));
        CHECK(oracle_fil_all(params, channel) == doctest::Approx(obs.fil_all).epsilon(1e-10));

        // Qubit-projection success probability never exceeds 1.
        CHECK(rates.z_lambda.s <= 1.0);
        CHECK(rates.z_lambda.valid());
    }
}

TEST_CASE("per-nu and aggregated inequalities hold on the physical state") {
    const ProtocolParams params(1e5, kKappaRef, 3.2);
    const ChannelParams channel(0.21, 30.0, 0.045, 1.7e-6);
    const PhotonWindow w = make_window(params, channel);
    const double r = params.reflectivity();

    RateVector z_sum{0.0, 0.0, 0.0, 0.0};
    double bit_sum = 0.0;
    for (std::int64_t nu = w.nu_i; nu <= w.nu_f; ++nu) {
        const QubitConstants q = qubit_constants(r, nu);
        const ErrorDecomposition d =
            error_decomposition(joint_state(params, channel, nu), q);
        const RateVector z{d.n_s, d.n_one_x, d.n_fil, d.n_ph};
        CHECK(per_nu_bound_gap(q, z, d.n_bit) >= -1e-12);
        z_sum.s += d.n_s;
        z_sum.one_x += d.n_one_x;
        z_sum.fil += d.n_fil;
        z_sum.ph += d.n_ph;
        bit_sum += d.n_bit;
    }
    // Aggregated form with C' and the nu_f coefficient.
    const CPrimeSplit cp = c_prime(r, w);
    const QubitConstants q_f = qubit_constants(r, w.nu_f);
    const double rhs = q_f.bound_coefficient() * g_function(mat_vec(cp.full, z_sum.to_vec4()));
    CHECK(z_sum.fil - 2.0 * bit_sum <= rhs + 1e-12);
}

TEST_CASE("dashed-line ordering and mu insensitivity") {
    const ChannelParams channel(0.21, 0.0, 0.045, 1.7e-6);
    const std::vector<double> grid{0.0, 10.0, 20.0, 30.0, 40.0};

    const ProtocolParams p_small(1e5, kKappaRef, 3.2);
    const ProtocolParams p_large(1e6, kKappaRef, 3.2);
    const auto oracle_small = actual_key_rate_curve(p_small, channel, grid);
    const auto oracle_large = actual_key_rate_curve(p_large, channel, grid);
    const auto est_small = scan_distance(p_small, channel, grid);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        REQUIRE(oracle_small[i].window_valid);
        if (est_small[i].key_rate > 0.0 && oracle_small[i].key_rate > 0.0)
            CHECK(est_small[i].key_rate <= oracle_small[i].key_rate * (1.0 + 1e-9));
        if (oracle_small[i].key_rate > 0.0 && oracle_large[i].key_rate > 0.0) {
            const double spread = std::abs(oracle_small[i].key_rate - oracle_large[i].key_rate) /
                                  oracle_large[i].key_rate;
            CHECK(spread < 0.05);
        }
    }
}

TEST_CASE("dark-free channel: dashed rate equals fil_win") {
    const ProtocolParams params(1e5, kKappaRef, 3.2);
    const ChannelParams channel(0.21, 25.0, 0.045, 0.0);
    const OracleRow row = oracle_point(params, channel);
    REQUIRE(row.window_valid);
    CHECK(row.key_rate == doctest::Approx(row.fil_win).epsilon(1e-12));
    // Loss-branch interference is perfect; only amplitude roundoff remains.
    CHECK(row.bit_win <= 1e-15 * row.fil_win);
    CHECK(row.ph_win == 0.0);
}
