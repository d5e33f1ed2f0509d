#pragma once

#include <cstdint>

#include "b92/observables.hpp"
#include "b92/params.hpp"

// Event-level sampling of the protocol under the loss + dark-count channel.
// The channel's detector statistics are exactly Poissonian, so the sampler
// draws those counts directly instead of tracking Fock amplitudes.

namespace b92 {

struct TrialTally {
    std::uint64_t conclusive_all = 0;
    std::uint64_t conclusive_win = 0;
    std::uint64_t vacuum_win = 0;
    std::uint64_t bit_err_win = 0;
    std::uint64_t bit_err_all = 0;
    std::uint64_t n_trials = 0;
    std::uint64_t rng_seed = 0;

    double rate(std::uint64_t count) const {
        return static_cast<double>(count) / static_cast<double>(n_trials);
    }
    /// Empirical counterpart of the analytic Observables.
    Observables to_observables() const {
        return Observables{rate(conclusive_all), rate(conclusive_win), rate(vacuum_win),
                           rate(bit_err_win), rate(bit_err_all)};
    }
};

/// Per trial: with probability p the dark branch fires (D1 ~
/// Poisson(eta(mu-kappa)); a single photon clicks D2 or D3 uniformly, a bit
/// error half the time); otherwise the loss branch (D1 ~ Poisson(eta(mu-kappa)),
/// interfering count ~ Poisson(2 eta kappa) on the bit-matched detector,
/// never an error). Conclusive = exactly one photon on D2+D3, vacuum = zero;
/// window membership is D1 in lambda^(D1). Deterministic given seed: trials
/// are split over a fixed shard count with per-shard derived generators, so
/// the tally is independent of how many threads execute the shards (threads
/// = 0 means use B92_THREADS or the hardware count).
TrialTally simulate(const ProtocolParams& params, const ChannelParams& channel,
                    const PhotonWindow& window, std::uint64_t n_trials, std::uint64_t seed,
                    unsigned threads = 0);

}  // namespace b92
