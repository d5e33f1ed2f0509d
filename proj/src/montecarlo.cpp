#include "b92/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

namespace b92 {

namespace {

constexpr unsigned kShards = 16;
constexpr double kExactPoissonLimit = 1000.0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t shard_seed(std::uint64_t seed, unsigned shard) {
    return splitmix64(seed ^ splitmix64(shard + 1));
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    // Uniform in (0, 1]; never zero so logs stay finite.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double normal() {
        // Box-Muller; only determinism and ~1e-4 window-membership accuracy
        // are needed here, not extreme-tail quality.
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::int64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean > kExactPoissonLimit) {
            // Continuity-corrected normal draw; D1 only needs window membership.
            const double v = std::round(mean + std::sqrt(mean) * normal());
            return v < 0.0 ? 0 : static_cast<std::int64_t>(v);
        }
        // Exponential-gap counting: exact for any mean, no underflow.
        std::int64_t k = 0;
        double acc = -std::log(uniform());
        while (acc <= mean) {
            ++k;
            acc -= std::log(uniform());
        }
        return k;
    }

    bool bernoulli(double prob) { return uniform() <= prob; }

private:
    std::mt19937_64 engine_;
};

TrialTally run_shard(const double d1_mean, const double interf_mean, const double p,
                     const std::int64_t win_lo, const std::int64_t win_hi,
                     std::uint64_t n_trials, std::uint64_t seed) {
    Sampler rng(seed);
    TrialTally t;
    t.n_trials = n_trials;
    for (std::uint64_t i = 0; i < n_trials; ++i) {
        (void)rng.bernoulli(0.5);  // Alice's bit; tallies only need match/mismatch
        const std::int64_t d1 = rng.poisson(d1_mean);
        const bool in_window = d1 >= win_lo && d1 <= win_hi;
        if (rng.bernoulli(p)) {
            // Dark branch: always exactly one click, random detector.
            const bool err = rng.bernoulli(0.5);
            ++t.conclusive_all;
            if (in_window) ++t.conclusive_win;
            if (err) {
                ++t.bit_err_all;
                if (in_window) ++t.bit_err_win;
            }
        } else {
            const std::int64_t clicks = rng.poisson(interf_mean);
            if (clicks == 1) {
                ++t.conclusive_all;
                if (in_window) ++t.conclusive_win;
            } else if (clicks == 0 && in_window) {
                ++t.vacuum_win;
            }
        }
    }
    return t;
}

unsigned thread_budget(unsigned requested) {
    if (requested > 0) return std::min(requested, kShards);
    if (const char* env = std::getenv("B92_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return std::min(static_cast<unsigned>(v), kShards);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, kShards);
}

}  // namespace

TrialTally simulate(const ProtocolParams& params, const ChannelParams& channel,
                    const PhotonWindow& window, std::uint64_t n_trials, std::uint64_t seed,
                    unsigned threads) {
    if (n_trials < 1) throw std::invalid_argument("simulate: n_trials must be >= 1");
    const double d1_mean = d1_poisson_mean(params, channel);
    const double interf_mean = 2.0 * channel.transmission() * params.kappa;

    // Fixed shard split so the tally depends on (config, seed) only.
    std::vector<TrialTally> parts(kShards);
    const std::uint64_t per = n_trials / kShards;
    const std::uint64_t extra = n_trials % kShards;
    auto work = [&](unsigned shard) {
        const std::uint64_t n = per + (shard < extra ? 1 : 0);
        parts[shard] = run_shard(d1_mean, interf_mean, channel.p, window.d1_lo(), window.d1_hi(),
                                 n, shard_seed(seed, shard));
    };

    const unsigned nthreads = thread_budget(threads);
    if (nthreads <= 1) {
        for (unsigned s = 0; s < kShards; ++s) work(s);
    } else {
        std::vector<std::thread> pool;
        for (unsigned tix = 0; tix < nthreads; ++tix)
            pool.emplace_back([&, tix] {
                for (unsigned s = tix; s < kShards; s += nthreads) work(s);
            });
        for (auto& th : pool) th.join();
    }

    TrialTally total;
    total.rng_seed = seed;
    for (const TrialTally& part : parts) {
        total.conclusive_all += part.conclusive_all;
        total.conclusive_win += part.conclusive_win;
        total.vacuum_win += part.vacuum_win;
        total.bit_err_win += part.bit_err_win;
        total.bit_err_all += part.bit_err_all;
        total.n_trials += part.n_trials;
    }
    return total;
}

}  // namespace b92
