#include "b92/phase_bound.hpp"

#include <algorithm>
#include <cmath>

namespace b92 {

BoundAssembly assemble_bounds(const Observables& obs, double alpha_tilde_sq,
                              std::optional<double> eta_tilde_test) {
    BoundAssembly a;
    a.eta_tilde = obs.eta_tilde();
    a.eta_tilde_test = eta_tilde_test.value_or(a.eta_tilde);
    double one_x_lower = alpha_tilde_sq - 1.0 + a.eta_tilde_test;
    a.one_x_clamped = one_x_lower < 0.0;
    if (a.one_x_clamped) one_x_lower = 0.0;
    a.z_upper = RateVector{1.0, alpha_tilde_sq, obs.fil_all, 0.0};
    a.z_lower = RateVector{a.eta_tilde, one_x_lower, obs.fil_win, 0.0};
    a.lhs = obs.fil_win - 2.0 * obs.bit_all;
    return a;
}

PhaseBoundSolution solve_phase_bound(const BoundAssembly& assembly, const CPrimeSplit& c_split,
                                     const QubitConstants& q_f, double fil_win,
                                     int grid_points) {
    if (!(fil_win > 0.0)) return {0.0, true};

    // The g-argument is affine in the trial phase rate: both Z_U and Z_L carry
    // it in slot 4, so u(ph) = base + ph * (C' column 4).
    Vec4 zu = assembly.z_upper.to_vec4();
    Vec4 zl = assembly.z_lower.to_vec4();
    zu[3] = 0.0;
    zl[3] = 0.0;
    const Vec4 up = mat_vec(c_split.plus, zu);
    const Vec4 um = mat_vec(c_split.minus, zl);
    Vec4 base{}, dir{};
    for (std::size_t k = 0; k < 4; ++k) {
        base[k] = up[k] - um[k];
        dir[k] = c_split.full(static_cast<int>(k), 3);
    }

    const double coef = q_f.bound_coefficient();
    auto satisfied = [&](double ph) {
        Vec4 u;
        for (std::size_t k = 0; k < 4; ++k) u[k] = base[k] + ph * dir[k];
        const auto g = try_g(u);
        return g && assembly.lhs <= coef * *g;
    };

    const double step = fil_win / static_cast<double>(grid_points);
    int top = -1;
    for (int k = grid_points; k >= 0; --k) {
        if (satisfied(static_cast<double>(k) * step)) {
            top = k;
            break;
        }
    }
    if (top < 0) return {fil_win, false};
    if (top == grid_points) return {fil_win, true};

    // Refine the boundary of the highest satisfying run.
    double lo = static_cast<double>(top) * step;
    double hi = static_cast<double>(top + 1) * step;
    while (hi - lo > 1e-6 * fil_win) {
        const double mid = 0.5 * (lo + hi);
        (satisfied(mid) ? lo : hi) = mid;
    }
    return {hi, true};
}

double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

namespace {

// Privacy-amplification cost of an error ratio: the entropy for x <= 1/2 and
// the full bit beyond (h itself falls again past 1/2, which must not revive
// the key).
double entropy_cost(double x) {
    return x < 0.5 ? binary_entropy(x) : 1.0;
}

}  // namespace

double key_rate(double fil_win, double bit_win, double phase_bound) {
    if (!(fil_win > 0.0)) return 0.0;
    const double rate =
        fil_win * (1.0 - entropy_cost(bit_win / fil_win) - entropy_cost(phase_bound / fil_win));
    return std::max(0.0, rate);
}

DistanceRow evaluate_point(const ProtocolParams& params, const ChannelParams& channel) {
    DistanceRow row;
    row.l_km = channel.l;
    row.eta = channel.transmission();

    PhotonWindow window{};
    try {
        window = make_window(params, channel);
    } catch (const std::exception&) {
        return row;  // infeasible regime: zero key, window_valid = false
    }
    row.window_valid = true;
    row.nu_i = window.nu_i;
    row.nu_f = window.nu_f;

    row.obs = analytic_observables(params, channel, window);
    const double alpha_sq = alice_nonorthogonality(params.kappa).alpha_tilde_sq;
    const BoundAssembly assembly = assemble_bounds(row.obs, alpha_sq);
    const CPrimeSplit split = c_prime(params.reflectivity(), window);
    const QubitConstants q_f = qubit_constants(params.reflectivity(), window.nu_f);
    const PhaseBoundSolution sol = solve_phase_bound(assembly, split, q_f, row.obs.fil_win);

    row.phase_bound = sol.phase_bound;
    row.feasible = sol.feasible;
    row.key_rate = sol.feasible ? key_rate(row.obs.fil_win, row.obs.bit_win, sol.phase_bound) : 0.0;
    return row;
}

std::vector<DistanceRow> scan_distance(const ProtocolParams& params,
                                       const ChannelParams& channel_template,
                                       const std::vector<double>& l_grid) {
    std::vector<DistanceRow> rows;
    rows.reserve(l_grid.size());
    for (double l : l_grid) rows.push_back(evaluate_point(params, channel_template.at_distance(l)));
    return rows;
}

double find_achievable_distance(const ProtocolParams& params,
                                const ChannelParams& channel_template, double l_max) {
    auto rate_at = [&](double l) {
        return evaluate_point(params, channel_template.at_distance(l)).key_rate;
    };
    if (!(rate_at(0.0) > 0.0)) return 0.0;

    // Coarse 1 km scan over the whole range: takes the largest positive point,
    // which also exposes any violation of the down-set assumption.
    double last_positive = 0.0;
    double first_zero = l_max;
    bool found_zero = false;
    for (double l = 1.0; l <= l_max + 0.5; l += 1.0) {
        if (rate_at(l) > 0.0) {
            last_positive = l;
        } else if (!found_zero || last_positive > first_zero) {
            first_zero = l;
            found_zero = true;
        }
    }
    if (!found_zero) return l_max;

    double lo = last_positive;
    double hi = std::max(first_zero, last_positive + 1.0);
    while (hi - lo > 0.1) {
        const double mid = 0.5 * (lo + hi);
        (rate_at(mid) > 0.0 ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace b92
