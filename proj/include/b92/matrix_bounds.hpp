#pragma once

#include <array>
#include <optional>

#include "b92/params.hpp"

// The 4x4 bound machinery: the concave function g, the matrices C_nu^-1 and
// C_nu relating the rate vector Z_nu to the X-basis occupation numbers, the
// entry-wise maximized C' over a photon window, and its positive/negative
// split. Row/column ordering is (s, 1x, fil, ph) throughout, matching the
// ordering of Z.

namespace b92 {

using Vec4 = std::array<double, 4>;

struct Mat4 {
    std::array<double, 16> e{};

    double& operator()(int r, int c) { return e[static_cast<std::size_t>(4 * r + c)]; }
    double operator()(int r, int c) const { return e[static_cast<std::size_t>(4 * r + c)]; }
};

Vec4 mat_vec(const Mat4& m, const Vec4& v);
Mat4 mat_mul(const Mat4& a, const Mat4& b);

/// Rate 4-vector Z = (Lambda_s, Lambda_1x, Lambda_fil, Lambda_ph).
struct RateVector {
    double s;
    double one_x;
    double fil;
    double ph;

    Vec4 to_vec4() const { return {s, one_x, fil, ph}; }
    bool valid() const { return ph <= fil && fil <= s && s <= 1.0 && one_x <= s; }
};

/// C' together with its split C' = C'+ - C'- (C'+ keeps the nonnegative
/// entries, C'- the negated negative ones; both are entrywise >= 0).
struct CPrimeSplit {
    Mat4 full;
    Mat4 plus;
    Mat4 minus;
};

/// g((a,b,c,d)^T) = sqrt(a*d) + sqrt(b*c). Concave, entrywise monotone
/// nondecreasing, positively homogeneous. Throws std::domain_error on a
/// negative entry; use try_g where a soft infeasibility signal is wanted.
double g_function(const Vec4& v);
std::optional<double> try_g(const Vec4& v);

/// The matrix with Z_nu = c_inverse * (n00, n01, n10, n11)^T.
Mat4 c_inverse(const QubitConstants& q);

/// Explicit inverse of c_inverse. Requires beta^2 > alpha^2 (nu*R < 1);
/// throws std::domain_error at or beyond that pole.
Mat4 c_matrix(const QubitConstants& q);

/// Entry-wise maximum of C_nu over nu in [nu_i, nu_f], from the closed-form
/// mix of nu_i/nu_f entries. In debug builds the result is cross-checked
/// against the brute-force maximum.
CPrimeSplit c_prime(double reflectivity, const PhotonWindow& window);

/// Brute-force element-wise max over every nu in the window (test oracle).
Mat4 c_prime_bruteforce(double reflectivity, const PhotonWindow& window);

/// Slack of the per-nu inequality
///   n_fil - 2 n_bit <= 2 G_nu alpha_nu beta_nu g(C_nu Z_nu):
/// returns RHS - LHS, nonnegative iff the inequality holds. Throws
/// std::domain_error when C_nu*z leaves g's domain.
double per_nu_bound_gap(const QubitConstants& q, const RateVector& z, double bit_rate);

}  // namespace b92
