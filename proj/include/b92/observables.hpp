#pragma once

#include <cstdint>

#include "b92/params.hpp"

// Analytic detection rates for the loss + dark-count channel
//   rho -> (1-p) * loss(eta) + p * single-photon replacement.
// All "rates" are per emitted pulse pair.

namespace b92 {

/// The five monitored rates. fil_win is Lambda_fil over lambda', vac_win is
/// the vacuum rate over lambda^(D1), bit_win the error rate over lambda'.
struct Observables {
    double fil_all;
    double fil_win;
    double vac_win;
    double bit_win;
    double bit_all;

    /// Lower bound on the qubit-survival rate: eta~ = vac_win + fil_win.
    double eta_tilde() const { return vac_win + fil_win; }
};

/// log of the Poisson(mean) pmf at k, cancellation-free up to means ~1e10
/// (Stirling form away from small k; the naive -mean + k ln mean - lgamma
/// anchor loses ~6 digits at mean 1e6).
double poisson_log_pmf(double mean, std::int64_t k);

/// Sum of the Poisson(mean) pmf over the inclusive integer interval [lo, hi],
/// evaluated by term recursion outward from the in-window mode so that means
/// up to ~1e10 stay in range. Negative lo is clamped to 0; an empty interval
/// gives 0.
double poisson_window_mass(double mean, std::int64_t lo, std::int64_t hi);

/// The closed-form observable block:
///   fil_all = e^(-2 eta kappa) 2 eta kappa (1-p) + e^(-eta kappa) p
///   fil_win = fil_all * W,  vac_win = e^(-2 eta kappa)(1-p) * W,
///   bit_win = (e^(-eta kappa) p / 2) * W,  bit_all = e^(-eta kappa) p / 2,
/// with W the Poisson(eta(mu-kappa)) mass over lambda^(D1).
Observables analytic_observables(const ProtocolParams& params, const ChannelParams& channel,
                                 const PhotonWindow& window);

}  // namespace b92
