#include "b92/matrix_bounds.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace b92 {

Vec4 mat_vec(const Mat4& m, const Vec4& v) {
    Vec4 out{};
    for (int r = 0; r < 4; ++r) {
        double acc = 0.0;
        for (int c = 0; c < 4; ++c) acc += m(r, c) * v[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

Mat4 mat_mul(const Mat4& a, const Mat4& b) {
    Mat4 out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += a(r, k) * b(k, c);
            out(r, c) = acc;
        }
    return out;
}

std::optional<double> try_g(const Vec4& v) {
    for (double x : v)
        if (x < 0.0) return std::nullopt;
    return std::sqrt(v[0] * v[3]) + std::sqrt(v[1] * v[2]);
}

double g_function(const Vec4& v) {
    auto r = try_g(v);
    if (!r) throw std::domain_error("g_function: negative entry (infeasible argument)");
    return *r;
}

Mat4 c_inverse(const QubitConstants& q) {
    const double ga = q.g_nu * q.alpha_sq();
    const double gb = q.g_nu * q.beta_sq();
    Mat4 m;
    m(0, 0) = 1.0; m(0, 1) = 1.0; m(0, 2) = 1.0; m(0, 3) = 1.0;
    m(1, 0) = 0.0; m(1, 1) = 0.0; m(1, 2) = 1.0; m(1, 3) = 1.0;
    m(2, 0) = ga;  m(2, 1) = gb;  m(2, 2) = ga;  m(2, 3) = gb;
    m(3, 0) = 0.0; m(3, 1) = gb;  m(3, 2) = ga;  m(3, 3) = 0.0;
    return m;
}

Mat4 c_matrix(const QubitConstants& q) {
    const double a2 = q.alpha_sq();
    const double b2 = q.beta_sq();
    const double d = b2 - a2;  // = (1 - nu R)/(1 + nu R)
    if (!(d > 0.0))
        throw std::domain_error("c_matrix: singular regime nu*R >= 1 (beta^2 <= alpha^2)");
    const double g = q.g_nu;
    Mat4 m;
    m(0, 0) = b2 * b2 / d;  m(0, 1) = -b2; m(0, 2) = -a2 / (g * d); m(0, 3) = -1.0 / g;
    m(1, 0) = -a2 * a2 / d; m(1, 1) = -a2; m(1, 2) = a2 / (g * d);  m(1, 3) = 1.0 / g;
    m(2, 0) = a2 * b2 / d;  m(2, 1) = b2;  m(2, 2) = -b2 / (g * d); m(2, 3) = 1.0 / g;
    m(3, 0) = -a2 * b2 / d; m(3, 1) = a2;  m(3, 2) = b2 / (g * d);  m(3, 3) = -1.0 / g;
    return m;
}

namespace {

CPrimeSplit split(const Mat4& full) {
    CPrimeSplit out;
    out.full = full;
    for (std::size_t k = 0; k < 16; ++k) {
        const double v = full.e[k];
        out.plus.e[k] = v >= 0.0 ? v : 0.0;
        out.minus.e[k] = v >= 0.0 ? 0.0 : -v;
    }
    return out;
}

}  // namespace

Mat4 c_prime_bruteforce(double reflectivity, const PhotonWindow& window) {
    Mat4 best = c_matrix(qubit_constants(reflectivity, window.nu_i));
    for (std::int64_t nu = window.nu_i + 1; nu <= window.nu_f; ++nu) {
        const Mat4 m = c_matrix(qubit_constants(reflectivity, nu));
        for (std::size_t k = 0; k < 16; ++k) best.e[k] = std::max(best.e[k], m.e[k]);
    }
    return best;
}

CPrimeSplit c_prime(double reflectivity, const PhotonWindow& window) {
    if (!window_regime_valid(reflectivity, window.nu_f))
        throw std::domain_error("c_prime: window fails the validity predicates");
    const Mat4 lo = c_matrix(qubit_constants(reflectivity, window.nu_i));
    const Mat4 hi = c_matrix(qubit_constants(reflectivity, window.nu_f));
    // Entry-wise extremes sit on the window edges; the eight derivative sign
    // conditions fix which edge per entry.
    Mat4 m;
    m(0, 0) = hi(0, 0); m(0, 1) = hi(0, 1); m(0, 2) = lo(0, 2); m(0, 3) = lo(0, 3);
    m(1, 0) = lo(1, 0); m(1, 1) = lo(1, 1); m(1, 2) = hi(1, 2); m(1, 3) = hi(1, 3);
    m(2, 0) = hi(2, 0); m(2, 1) = lo(2, 1); m(2, 2) = lo(2, 2); m(2, 3) = hi(2, 3);
    m(3, 0) = lo(3, 0); m(3, 1) = hi(3, 1); m(3, 2) = hi(3, 2); m(3, 3) = lo(3, 3);
#ifndef NDEBUG
    if (window.size() <= 100000) {
        const Mat4 bf = c_prime_bruteforce(reflectivity, window);
        for (std::size_t k = 0; k < 16; ++k)
            assert(std::abs(m.e[k] - bf.e[k]) <=
                   1e-12 * std::max({1.0, std::abs(m.e[k]), std::abs(bf.e[k])}));
    }
#endif
    return split(m);
}

double per_nu_bound_gap(const QubitConstants& q, const RateVector& z, double bit_rate) {
    // C_nu z reconstructs the occupation vector through cancellation; a
    // mathematically-zero entry can land a few ulps below zero. Entries within
    // the roundoff floor of the row's absolute sum are flushed to 0; anything
    // further negative is a genuine domain violation.
    const Mat4 c = c_matrix(q);
    const Vec4 v = z.to_vec4();
    Vec4 arg{};
    for (int r = 0; r < 4; ++r) {
        double acc = 0.0;
        double abs_acc = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double term = c(r, k) * v[static_cast<std::size_t>(k)];
            acc += term;
            abs_acc += std::abs(term);
        }
        if (acc < 0.0 && acc >= -1e-13 * abs_acc) acc = 0.0;
        arg[static_cast<std::size_t>(r)] = acc;
    }
    const double rhs = q.bound_coefficient() * g_function(arg);
    const double lhs = z.fil - 2.0 * bit_rate;
    return rhs - lhs;
}

}  // namespace b92
