#pragma once

#include <vector>

#include "b92/matrix_bounds.hpp"
#include "b92/observables.hpp"
#include "b92/params.hpp"

// Exact per-nu joint state of Alice's qubit and Bob's nu-photon qubit space
// for the loss + dark-count channel, and the true error rates it induces (the
// dashed reference curve). Everything here is real symmetric: the basis is
// |i_x>_A (x) |i'_x^(nu)>_B with index order 00, 01, 10, 11.

namespace b92 {

/// Unnormalized 4x4 density matrix at total photon number nu; weight is its
/// trace, the probability of landing in this qubit space.
struct JointQubitState {
    std::int64_t nu;
    Mat4 matrix;
    double weight;
};

/// X-basis occupations n_ii', rotated-basis occupations m_ii' (the
/// Gamma_ii' basis), and the derived per-nu event probabilities.
struct ErrorDecomposition {
    double n00, n01, n10, n11;
    double m00, m01, m10, m11;
    double n_s;      // qubit survival
    double n_one_x;  // Alice 1_x and survival
    double n_fil;    // conclusive
    double n_ph;     // phase error
    double n_bit;    // bit error
};

JointQubitState joint_state(const ProtocolParams& params, const ChannelParams& channel,
                            std::int64_t nu);

ErrorDecomposition error_decomposition(const JointQubitState& state, const QubitConstants& q);

// Explicit POVM elements on the 4-dimensional joint space (independent route
// for validating the formula-based decomposition above).
Mat4 povm_survival(const QubitConstants& q);
Mat4 povm_one_x(const QubitConstants& q);
Mat4 povm_filter(const QubitConstants& q);
Mat4 povm_bit_error(const QubitConstants& q);
Mat4 povm_phase_error(const QubitConstants& q);

/// True windowed rates summed from the per-nu states: conclusive/bit/phase
/// over lambda', vacuum over lambda^(D1), plus the aggregated Z_lambda and
/// bit rate over the full window for the summed inequality.
struct OracleRates {
    double fil_win = 0.0;
    double bit_win = 0.0;
    double ph_win = 0.0;
    double vac_win = 0.0;
    RateVector z_lambda{0.0, 0.0, 0.0, 0.0};
    double bit_lambda = 0.0;
};

OracleRates oracle_rates(const ProtocolParams& params, const ChannelParams& channel,
                         const PhotonWindow& window);

/// Conclusive rate summed over every nu (no window), for cross-checking the
/// closed-form fil_all.
double oracle_fil_all(const ProtocolParams& params, const ChannelParams& channel);

struct OracleRow {
    double l_km = 0.0;
    double fil_win = 0.0;
    double bit_win = 0.0;
    double ph_win = 0.0;
    double key_rate = 0.0;
    bool window_valid = false;
};

/// Key rate from the actual phase error rate over lambda' instead of the
/// solved bound.
std::vector<OracleRow> actual_key_rate_curve(const ProtocolParams& params,
                                             const ChannelParams& channel_template,
                                             const std::vector<double>& l_grid);

OracleRow oracle_point(const ProtocolParams& params, const ChannelParams& channel);

}  // namespace b92
