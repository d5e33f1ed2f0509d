#pragma once

#include <optional>
#include <vector>

#include "b92/matrix_bounds.hpp"
#include "b92/observables.hpp"
#include "b92/params.hpp"

// Assembles the entrywise bounds Z_L <= Z_lambda <= Z_U from the observables,
// solves the inequality
//   Lambda_fil,lambda' - 2 Lambda_bit,all
//       <= 2 G_f alpha_f beta_f g(C'+ Z_U - C'- Z_L)
// for the supremum feasible phase-error rate, and turns the result into a key
// rate. Distance scans and the achievable-distance search sit on top.

namespace b92 {

struct BoundAssembly {
    RateVector z_upper;      // (1, alpha~^2, fil_all, .)
    RateVector z_lower;      // (eta~, alpha~^2 - 1 + eta~_t, fil_win, .)
    double eta_tilde;
    double eta_tilde_test;   // equals eta_tilde unless test-pair data is supplied
    double lhs;              // fil_win - 2 bit_all
    bool one_x_clamped;      // Z_L second entry hit the 0 floor
};

struct KeyRateResult {
    double phase_bound;
    double key_rate;
    bool feasible;
};

/// When eta_tilde_test is absent the single-eta~ main form is used; passing a
/// value selects the two-parameter variant. A negative Z_L second entry is
/// clamped to 0 (a rate cannot be negative; loosening a lower bound is the
/// conservative direction) and flagged.
BoundAssembly assemble_bounds(const Observables& obs, double alpha_tilde_sq,
                              std::optional<double> eta_tilde_test = std::nullopt);

struct PhaseBoundSolution {
    double phase_bound;
    bool feasible;
};

/// sup{ ph in [0, fil_win] : lhs <= coef * g(C'+ Z_U(ph) - C'- Z_L(ph)) },
/// found by an exhaustive descending grid scan (the RHS is not monotone in
/// ph) plus bisection refinement of the boundary to 1e-6 relative. Trial
/// points whose g-argument has a negative entry are infeasible: the true rate
/// vector always produces a nonnegative argument, so such points cannot be
/// the truth and keeping them would trivialize the bound. If no point
/// satisfies the inequality the worst case (fil_win, feasible = false) is
/// returned.
PhaseBoundSolution solve_phase_bound(const BoundAssembly& assembly, const CPrimeSplit& c_split,
                                     const QubitConstants& q_f, double fil_win,
                                     int grid_points = 1 << 16);

/// Binary entropy h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

/// G_key = max(0, fil_win [1 - h(bit_win/fil_win) - h(phase_bound/fil_win)]).
/// An error ratio at or beyond 1/2 costs the full bit (no key revives past
/// the h maximum).
double key_rate(double fil_win, double bit_win, double phase_bound);

struct DistanceRow {
    double l_km = 0.0;
    double eta = 0.0;
    std::int64_t nu_i = 0;
    std::int64_t nu_f = 0;
    Observables obs{};
    double phase_bound = 0.0;
    double key_rate = 0.0;
    bool feasible = false;      // estimation produced a nontrivial bound
    bool window_valid = false;  // make_window succeeded
};

/// Full pipeline at one distance. Window failures yield an infeasible row
/// with zero key instead of throwing.
DistanceRow evaluate_point(const ProtocolParams& params, const ChannelParams& channel);

std::vector<DistanceRow> scan_distance(const ProtocolParams& params,
                                       const ChannelParams& channel_template,
                                       const std::vector<double>& l_grid);

/// Largest l with positive key rate: coarse 1 km scan (which also verifies
/// empirically that positivity is a down-set) followed by bisection to
/// 0.1 km. Returns 0 when the rate is already zero at l = 0.
double find_achievable_distance(const ProtocolParams& params,
                                const ChannelParams& channel_template, double l_max = 300.0);

}  // namespace b92
