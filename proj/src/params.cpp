#include "b92/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace b92 {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

ProtocolParams::ProtocolParams(double mu_, double kappa_, double a_, double t_)
    : mu(mu_), kappa(kappa_), a(a_), t(t_) {
    require(std::isfinite(mu) && mu > 0.0, "ProtocolParams: mu must be > 0");
    require(std::isfinite(kappa) && kappa > 0.0, "ProtocolParams: kappa must be > 0");
    require(kappa < mu, "ProtocolParams: kappa must be < mu (weak signal vs strong reference)");
    require(std::isfinite(a) && a > 0.0, "ProtocolParams: a must be > 0");
    require(std::isfinite(t) && t > 0.0 && t < 1.0, "ProtocolParams: t must lie in (0,1)");
    const double r = kappa / mu;
    require(r > 0.0 && r < 1.0, "ProtocolParams: derived R = kappa/mu must lie in (0,1)");
}

ChannelParams::ChannelParams(double xi_, double l_, double eta_bob_, double p_)
    : xi(xi_), l(l_), eta_bob(eta_bob_), p(p_) {
    require(std::isfinite(xi) && xi >= 0.0, "ChannelParams: xi must be >= 0");
    require(std::isfinite(l) && l >= 0.0, "ChannelParams: l must be >= 0");
    require(std::isfinite(eta_bob) && eta_bob > 0.0 && eta_bob <= 1.0,
            "ChannelParams: eta_bob must lie in (0,1]");
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "ChannelParams: p must lie in [0,1]");
    const double eta = transmission();
    require(eta > 0.0 && eta <= 1.0, "ChannelParams: derived eta must lie in (0,1]");
}

double ChannelParams::transmission() const {
    return std::pow(10.0, -xi * l / 10.0) * eta_bob;
}

QubitConstants qubit_constants(double reflectivity, std::int64_t nu) {
    if (!(reflectivity > 0.0 && reflectivity < 1.0))
        throw std::invalid_argument("qubit_constants: R must lie in (0,1)");
    if (nu < 1) throw std::invalid_argument("qubit_constants: nu must be >= 1");
    const double nu_r = static_cast<double>(nu) * reflectivity;
    // log1p keeps (1-R)^(nu-1) accurate for R down to ~1e-11 at nu ~ 1e9.
    const double g = std::exp(static_cast<double>(nu - 1) * std::log1p(-reflectivity)) * (1.0 + nu_r);
    return QubitConstants{nu, g, std::sqrt(nu_r / (1.0 + nu_r)), std::sqrt(1.0 / (1.0 + nu_r))};
}

bool window_regime_valid(double reflectivity, std::int64_t nu_f) {
    const double nf = static_cast<double>(nu_f);
    if (!(nf * reflectivity < 1.0)) return false;
    return nf <= -1.0 / (2.0 * std::log1p(-reflectivity));
}

PhotonWindow make_window_at(double eta, const ProtocolParams& params) {
    const double center = eta * params.mu;
    const double half = params.a * std::sqrt(center);
    std::int64_t nu_i = static_cast<std::int64_t>(std::floor(center - half));
    if (nu_i < 1) nu_i = 1;  // photon counts are nonnegative and nu = 0 has no qubit space
    const std::int64_t nu_f = static_cast<std::int64_t>(std::ceil(center + half));
    if (nu_f <= nu_i)
        throw std::domain_error("make_window: degenerate window (|lambda| < 2)");
    const double r = params.reflectivity();
    if (!window_regime_valid(r, nu_f))
        throw std::domain_error(
            "make_window: invalid parameter regime (requires nu_f*R < 1 and "
            "nu_f <= -1/(2 ln(1-R)))");
    return PhotonWindow{nu_i, nu_f};
}

PhotonWindow make_window(const ProtocolParams& params, const ChannelParams& channel) {
    return make_window_at(channel.transmission(), params);
}

DetectorEquivalence detector_equivalence(double eta1, double eta_prime, double reflectivity) {
    if (!(eta1 > 0.0 && eta1 <= 1.0) || !(eta_prime > 0.0 && eta_prime <= 1.0))
        throw std::invalid_argument("detector_equivalence: efficiencies must lie in (0,1]");
    if (!(reflectivity > 0.0 && reflectivity < 1.0))
        throw std::invalid_argument("detector_equivalence: R must lie in (0,1)");
    const double srp = reflectivity * eta_prime + (1.0 - reflectivity) * eta1;
    return DetectorEquivalence{eta_prime, srp, reflectivity * eta_prime / srp};
}

AliceNonorthogonality alice_nonorthogonality(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("alice_nonorthogonality: kappa must be > 0");
    // -expm1 keeps the kappa -> 0 limit (alpha~^2 -> kappa) exact.
    return AliceNonorthogonality{-std::expm1(-2.0 * kappa) / 2.0};
}

double d1_poisson_mean(const ProtocolParams& params, const ChannelParams& channel) {
    return channel.transmission() * (params.mu - params.kappa);
}

}  // namespace b92
