#include "b92/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace b92 {

namespace {

// Relative floor below which further terms cannot move the sum.
constexpr double kTermCutoff = 1e-18;

// log1p(x) - x without cancellation for small |x|.
double log1p_minus_x(double x) {
    if (std::abs(x) >= 0.5) return std::log1p(x) - x;
    // sum_{j>=2} (-1)^(j+1) x^j / j
    double term = -0.5 * x * x;
    double sum = term;
    for (int j = 3; j < 200; ++j) {
        term *= -x * static_cast<double>(j - 1) / static_cast<double>(j);
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

double poisson_log_pmf(double mean, std::int64_t k) {
    const double kd = static_cast<double>(k);
    if (mean == 0.0) return k == 0 ? 0.0 : -INFINITY;
    if (k < 32) return -mean + kd * std::log(mean) - std::lgamma(kd + 1.0);
    // log P = k (log1p(x) - x) - log sqrt(2 pi k) - stirling(k), x = (mean-k)/k.
    const double x = (mean - kd) / kd;
    const double inv = 1.0 / kd;
    const double inv2 = inv * inv;
    const double stirling =
        inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0;
    return kd * log1p_minus_x(x) - 0.5 * std::log(2.0 * 3.14159265358979323846 * kd) - stirling;
}

double poisson_window_mass(double mean, std::int64_t lo, std::int64_t hi) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson_window_mass: mean must be finite and >= 0");
    if (lo < 0) lo = 0;
    if (hi < lo) return 0.0;
    if (mean == 0.0) return lo == 0 ? 1.0 : 0.0;

    // Anchor at the in-window point closest to the mode, then recurse outward:
    // P(k+1) = P(k) * mean/(k+1), P(k-1) = P(k) * k/mean. Kahan compensation
    // keeps the long sums (~1e6 terms at mean 1e10) at full precision.
    const std::int64_t mode = std::clamp(static_cast<std::int64_t>(std::floor(mean)), lo, hi);
    const double anchor = std::exp(poisson_log_pmf(mean, mode));
    if (anchor == 0.0) return 0.0;

    double sum = anchor;
    double comp = 0.0;
    auto add = [&](double term) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };

    double term = anchor;
    for (std::int64_t k = mode + 1; k <= hi; ++k) {
        term *= mean / static_cast<double>(k);
        if (term < kTermCutoff * anchor) break;
        add(term);
    }
    term = anchor;
    for (std::int64_t k = mode; k > lo; --k) {
        term *= static_cast<double>(k) / mean;
        if (term < kTermCutoff * anchor) break;
        add(term);
    }
    return std::min(sum, 1.0);
}

Observables analytic_observables(const ProtocolParams& params, const ChannelParams& channel,
                                 const PhotonWindow& window) {
    const double eta = channel.transmission();
    const double ek = eta * params.kappa;
    const double p = channel.p;
    const double mass = poisson_window_mass(d1_poisson_mean(params, channel),
                                            window.d1_lo(), window.d1_hi());

    Observables obs;
    obs.fil_all = std::exp(-2.0 * ek) * 2.0 * ek * (1.0 - p) + std::exp(-ek) * p;
    obs.fil_win = obs.fil_all * mass;
    obs.vac_win = std::exp(-2.0 * ek) * (1.0 - p) * mass;
    obs.bit_all = std::exp(-ek) * p / 2.0;
    obs.bit_win = obs.bit_all * mass;
    return obs;
}

}  // namespace b92
