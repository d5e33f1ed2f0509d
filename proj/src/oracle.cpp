#include "b92/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "b92/phase_bound.hpp"

namespace b92 {

namespace {

// log <n | sqrt(m)> for a coherent state of mean photon number m; the squared
// amplitude is the Poisson(m) pmf.
double log_coherent_amp(double m, std::int64_t n) {
    return 0.5 * poisson_log_pmf(m, n);
}

Mat4 outer(const Vec4& v) {
    Mat4 m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            m(r, c) = v[static_cast<std::size_t>(r)] * v[static_cast<std::size_t>(c)];
    return m;
}

// Rotated joint basis: Gamma_00 = beta|00> + alpha|11>, Gamma_11 = alpha|00> - beta|11>,
// Gamma_01 = beta|01> - alpha|10>, Gamma_10 = alpha|01> + beta|10>.
Vec4 gamma_vector(const QubitConstants& q, int i, int ip) {
    const double al = q.alpha_nu;
    const double be = q.beta_nu;
    if (i == 0 && ip == 0) return {be, 0.0, 0.0, al};
    if (i == 1 && ip == 1) return {al, 0.0, 0.0, -be};
    if (i == 0 && ip == 1) return {0.0, be, -al, 0.0};
    return {0.0, al, be, 0.0};
}

double expectation(const Mat4& rho, const Vec4& v) {
    const Vec4 rv = mat_vec(rho, v);
    double acc = 0.0;
    for (std::size_t k = 0; k < 4; ++k) acc += v[k] * rv[k];
    return acc;
}

}  // namespace

JointQubitState joint_state(const ProtocolParams& params, const ChannelParams& channel,
                            std::int64_t nu) {
    if (nu < 1) throw std::invalid_argument("joint_state: nu must be >= 1");
    const double eta = channel.transmission();
    const double ek = eta * params.kappa;
    const double em = eta * params.mu;
    const double p = channel.p;

    // Loss branch: the purification projected onto H^(nu) collapses to
    //   A0 |0_x 0_x> + A1 |1_x 1_x>,
    // A0 = e^(-eta kappa/2) <nu|sqrt(eta mu)>, A1 = sqrt(eta kappa) e^(-eta kappa/2) <nu-1|sqrt(eta mu)>.
    const double log_a0 = -0.5 * ek + log_coherent_amp(em, nu);
    const double log_a1 = -0.5 * ek + 0.5 * std::log(ek) + log_coherent_amp(em, nu - 1);
    const double a0 = std::exp(log_a0);
    const double a1 = std::exp(log_a1);

    // Dark branch: Alice's reduced state diag_x(beta~^2, alpha~^2) against
    // |1_x^(nu)>_B with weight |<nu-1|sqrt(eta mu)>|^2.
    const double dark = p * std::exp(2.0 * log_coherent_amp(em, nu - 1));
    const double alpha_t_sq = alice_nonorthogonality(params.kappa).alpha_tilde_sq;

    JointQubitState st;
    st.nu = nu;
    st.matrix = Mat4{};
    st.matrix(0, 0) = (1.0 - p) * a0 * a0;
    st.matrix(0, 3) = (1.0 - p) * a0 * a1;
    st.matrix(3, 0) = st.matrix(0, 3);
    st.matrix(3, 3) = (1.0 - p) * a1 * a1 + dark * alpha_t_sq;
    st.matrix(1, 1) = dark * (1.0 - alpha_t_sq);
    st.weight = st.matrix(0, 0) + st.matrix(1, 1) + st.matrix(3, 3);
    if (st.weight < 1e-300) {
        st.matrix = Mat4{};
        st.weight = 0.0;
    }
    return st;
}

ErrorDecomposition error_decomposition(const JointQubitState& state, const QubitConstants& q) {
    const Mat4& rho = state.matrix;
    ErrorDecomposition d{};
    d.n00 = rho(0, 0);
    d.n01 = rho(1, 1);
    d.n10 = rho(2, 2);
    d.n11 = rho(3, 3);
    d.m00 = expectation(rho, gamma_vector(q, 0, 0));
    d.m01 = expectation(rho, gamma_vector(q, 0, 1));
    d.m10 = expectation(rho, gamma_vector(q, 1, 0));
    d.m11 = expectation(rho, gamma_vector(q, 1, 1));

    const double a2 = q.alpha_sq();
    const double b2 = q.beta_sq();
    d.n_s = d.n00 + d.n01 + d.n10 + d.n11;
    d.n_one_x = d.n10 + d.n11;
    d.n_fil = q.g_nu * (a2 * (d.n00 + d.n10) + b2 * (d.n01 + d.n11));
    d.n_ph = q.g_nu * (a2 * d.n10 + b2 * d.n01);
    d.n_bit = 0.5 * q.g_nu * (d.m11 + d.m01);
    return d;
}

Mat4 povm_survival(const QubitConstants&) {
    Mat4 m;
    for (int k = 0; k < 4; ++k) m(k, k) = 1.0;
    return m;
}

Mat4 povm_one_x(const QubitConstants&) {
    Mat4 m;
    m(2, 2) = 1.0;
    m(3, 3) = 1.0;
    return m;
}

Mat4 povm_filter(const QubitConstants& q) {
    const double ga = q.g_nu * q.alpha_sq();
    const double gb = q.g_nu * q.beta_sq();
    Mat4 m;
    m(0, 0) = ga;
    m(1, 1) = gb;
    m(2, 2) = ga;
    m(3, 3) = gb;
    return m;
}

Mat4 povm_phase_error(const QubitConstants& q) {
    Mat4 m;
    m(1, 1) = q.g_nu * q.beta_sq();
    m(2, 2) = q.g_nu * q.alpha_sq();
    return m;
}

Mat4 povm_bit_error(const QubitConstants& q) {
    // P(|0_z>) (x) F_1 + P(|1_z>) (x) F_0 = (G/2)[P(Gamma_11) + P(Gamma_01)].
    const Mat4 p11 = outer(gamma_vector(q, 1, 1));
    const Mat4 p01 = outer(gamma_vector(q, 0, 1));
    Mat4 m;
    for (std::size_t k = 0; k < 16; ++k) m.e[k] = 0.5 * q.g_nu * (p11.e[k] + p01.e[k]);
    return m;
}

OracleRates oracle_rates(const ProtocolParams& params, const ChannelParams& channel,
                         const PhotonWindow& window) {
    const double r = params.reflectivity();
    const double log_one_minus_r = std::log1p(-r);
    OracleRates acc;
    for (std::int64_t nu = window.nu_i; nu <= window.nu_f; ++nu) {
        const JointQubitState st = joint_state(params, channel, nu);
        if (st.weight == 0.0) continue;
        const QubitConstants q = qubit_constants(r, nu);
        const ErrorDecomposition d = error_decomposition(st, q);
        acc.z_lambda.s += d.n_s;
        acc.z_lambda.one_x += d.n_one_x;
        acc.z_lambda.fil += d.n_fil;
        acc.z_lambda.ph += d.n_ph;
        acc.bit_lambda += d.n_bit;
        if (nu >= window.prime_lo()) {
            acc.fil_win += d.n_fil;
            acc.bit_win += d.n_bit;
            acc.ph_win += d.n_ph;
        }
        if (nu <= window.d1_hi()) {
            // Vacuum with D1 in window: the B-side 0_x component with every
            // SRP photon transmitted to D1, probability (1-R)^nu.
            acc.vac_win += (d.n00 + d.n10) * std::exp(static_cast<double>(nu) * log_one_minus_r);
        }
    }
    return acc;
}

double oracle_fil_all(const ProtocolParams& params, const ChannelParams& channel) {
    const double em = channel.transmission() * params.mu;
    const double sigma = std::sqrt(em);
    const std::int64_t lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(em - 40.0 * sigma));
    const std::int64_t hi = static_cast<std::int64_t>(std::ceil(em + 40.0 * sigma)) + 2;
    const double r = params.reflectivity();
    double acc = 0.0;
    for (std::int64_t nu = lo; nu <= hi; ++nu) {
        const JointQubitState st = joint_state(params, channel, nu);
        if (st.weight == 0.0) continue;
        acc += error_decomposition(st, qubit_constants(r, nu)).n_fil;
    }
    return acc;
}

OracleRow oracle_point(const ProtocolParams& params, const ChannelParams& channel) {
    OracleRow row;
    row.l_km = channel.l;
    PhotonWindow window{};
    try {
        window = make_window(params, channel);
    } catch (const std::exception&) {
        return row;
    }
    row.window_valid = true;
    const OracleRates rates = oracle_rates(params, channel, window);
    row.fil_win = rates.fil_win;
    row.bit_win = rates.bit_win;
    row.ph_win = rates.ph_win;
    row.key_rate = key_rate(rates.fil_win, rates.bit_win, rates.ph_win);
    return row;
}

std::vector<OracleRow> actual_key_rate_curve(const ProtocolParams& params,
                                             const ChannelParams& channel_template,
                                             const std::vector<double>& l_grid) {
    std::vector<OracleRow> rows;
    rows.reserve(l_grid.size());
    for (double l : l_grid) rows.push_back(oracle_point(params, channel_template.at_distance(l)));
    return rows;
}

}  // namespace b92
