#pragma once

#include <cstdint>
#include <optional>

// Protocol and channel parameters for the strong-reference-pulse B92 scheme,
// plus the photon-number window and the per-nu qubit-space constants that
// every other module consumes.

namespace b92 {

/// Alice/Bob protocol settings. mu is the mean photon number of the strong
/// reference pulse, kappa the mean photon number of the signal pulse
/// (kappa << mu), a the window half-width in units of sqrt(eta*mu), and t the
/// test-pair fraction. All validated eagerly; the beam-splitter reflectivity
/// R = kappa/mu is derived.
struct ProtocolParams {
    double mu;
    double kappa;
    double a;
    double t;

    ProtocolParams(double mu, double kappa, double a, double t = 0.01);

    double reflectivity() const { return kappa / mu; }
};

/// Fiber/detector model: xi in dB/km, distance l in km, Bob's detection
/// efficiency, and the dark/replacement probability p. The end-to-end
/// transmission eta = 10^(-xi*l/10) * eta_bob must land in (0, 1].
struct ChannelParams {
    double xi;
    double l;
    double eta_bob;
    double p;

    ChannelParams(double xi, double l, double eta_bob, double p);

    double transmission() const;

    /// Same channel at a different distance.
    ChannelParams at_distance(double l_km) const { return {xi, l_km, eta_bob, p}; }
};

/// Integer photon-number window. The three intervals in play are
///   lambda^(D1) = [nu_i, nu_f-1]   (D1 counts kept for the key)
///   lambda'     = [nu_i+1, nu_f]   (total photon number of kept conclusive events)
///   lambda      = [nu_i, nu_f]     (their union)
struct PhotonWindow {
    std::int64_t nu_i;
    std::int64_t nu_f;

    std::int64_t d1_lo() const { return nu_i; }
    std::int64_t d1_hi() const { return nu_f - 1; }
    std::int64_t prime_lo() const { return nu_i + 1; }
    std::int64_t prime_hi() const { return nu_f; }
    std::int64_t size() const { return nu_f - nu_i + 1; }
};

/// Constants of the nu-photon qubit space:
///   G_nu    = (1-R)^(nu-1) * (1+nu*R)
///   alpha^2 = nu*R/(1+nu*R),  beta^2 = 1/(1+nu*R)
struct QubitConstants {
    std::int64_t nu;
    double g_nu;
    double alpha_nu;
    double beta_nu;

    double alpha_sq() const { return alpha_nu * alpha_nu; }
    double beta_sq() const { return beta_nu * beta_nu; }
    /// 2 * G_nu * alpha_nu * beta_nu, the coefficient of the per-nu bound.
    double bound_coefficient() const { return 2.0 * g_nu * alpha_nu * beta_nu; }
};

/// Nonorthogonality of Alice's two signal states: alpha~^2 = (1 - e^(-2 kappa))/2.
struct AliceNonorthogonality {
    double alpha_tilde_sq;
};

/// Equivalent passive-absorber description of non-unit detector efficiencies.
struct DetectorEquivalence {
    double signal_absorber;          // transmission placed in the S mode
    double srp_absorber;             // transmission placed in the SRP mode
    double effective_reflectivity;   // adjusted BS1 reflectivity
};

QubitConstants qubit_constants(double reflectivity, std::int64_t nu);

/// Rounds eta*mu -/+ a*sqrt(eta*mu) outward (floor/ceil; widening is the
/// conservative direction) and clamps nu_i to >= 1. Throws std::domain_error
/// when the monotonicity preconditions nu_f*R < 1 or
/// nu_f <= -1/(2 ln(1-R)) fail: that is an invalid parameter regime, not a
/// numeric bug.
PhotonWindow make_window(const ProtocolParams& params, const ChannelParams& channel);

/// Same edges from precomputed eta (used by sweeps that vary l only).
PhotonWindow make_window_at(double eta, const ProtocolParams& params);

/// True when both window validity predicates hold for the given edges.
bool window_regime_valid(double reflectivity, std::int64_t nu_f);

DetectorEquivalence detector_equivalence(double eta1, double eta_prime, double reflectivity);

AliceNonorthogonality alice_nonorthogonality(double kappa);

/// Poisson mean of D1's count: eta * (mu - kappa).
double d1_poisson_mean(const ProtocolParams& params, const ChannelParams& channel);

}  // namespace b92
