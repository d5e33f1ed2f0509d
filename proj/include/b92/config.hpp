#pragma once

#include <cstdint>
#include <string>

#include "b92/params.hpp"

// Run configuration shared by every subcommand. Defaults reproduce the
// mu = 10^6.59 curve of the reference parameter set (Gobby-type fiber and
// detector figures). The on-disk format is flat `key = value` lines with `#`
// comments and case-sensitive keys; command-line flags override file values.

namespace b92 {

struct RunConfig {
    double mu = 3890451.4499428;  // 10^6.59
    double kappa = 0.12022644346;  // 10^-0.92
    double a = 3.2;
    double t = 0.01;

    double xi = 0.21;
    double eta_bob = 0.045;
    double p = 1.7e-6;

    double l = 0.0;
    double l_min = 0.0;
    double l_max = 160.0;
    double l_step = 1.0;

    std::uint64_t trials = 1000000;
    std::uint64_t seed = 12345;

    double n_pairs = 1e12;
    double delta = 1e-10;

    bool use_oracle = false;
    bool two_eta = false;

    std::string out;

    ProtocolParams protocol() const { return ProtocolParams(mu, kappa, a, t); }
    ChannelParams channel() const { return ChannelParams(xi, l, eta_bob, p); }
    ChannelParams channel_at(double l_km) const { return ChannelParams(xi, l_km, eta_bob, p); }
};

/// Applies `key = value` lines from the given text. Throws
/// std::invalid_argument on unknown keys or malformed lines/values, naming
/// the offender.
void apply_config_text(RunConfig& config, const std::string& text);

/// Reads and applies a config file. Throws std::runtime_error when the file
/// cannot be read.
void apply_config_file(RunConfig& config, const std::string& path);

/// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace b92
