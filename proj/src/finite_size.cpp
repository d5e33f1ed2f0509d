#include "b92/finite_size.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace b92 {

double deviation(double n_pairs, double t, double delta, Population population) {
    if (!(n_pairs >= 1.0)) throw std::invalid_argument("deviation: N must be >= 1");
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("deviation: t must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("deviation: delta must lie in (0,1)");
    if (std::isinf(n_pairs)) return 0.0;
    const double fraction = population == Population::code ? 1.0 - t : t;
    return std::sqrt(2.0 * std::log(2.0 / delta) / n_pairs) / fraction;
}

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

FiniteSizeResult finite_size_key_rate(const Observables& obs, double alpha_tilde_sq,
                                      const AzumaBudget& budget, const QubitConstants& q_f,
                                      const CPrimeSplit& c_split, bool two_eta) {
    const double ec = budget.epsilon_code();
    const double et = budget.epsilon_test();

    Observables w = obs;
    w.fil_win = clamp01(obs.fil_win - ec);
    w.fil_all = clamp01(obs.fil_all + ec);
    w.bit_all = clamp01(obs.bit_all + ec);
    const double eta_tilde = clamp01(obs.eta_tilde() - ec);
    // Keep eta~ = vac_win + fil_win consistent inside the widened record.
    w.vac_win = clamp01(eta_tilde - w.fil_win);

    const double eta_tilde_test =
        two_eta ? clamp01(obs.eta_tilde() - et) : eta_tilde;

    BoundAssembly assembly = assemble_bounds(w, alpha_tilde_sq, eta_tilde_test);
    // alpha~^2 enters Z_U from above and Z_L from below.
    assembly.z_upper.one_x = clamp01(alpha_tilde_sq + et);
    if (!assembly.one_x_clamped) {
        const double lower = alpha_tilde_sq - et - 1.0 + eta_tilde_test;
        assembly.z_lower.one_x = std::max(0.0, lower);
        assembly.one_x_clamped = lower < 0.0;
    }

    const PhaseBoundSolution sol = solve_phase_bound(assembly, c_split, q_f, w.fil_win);

    FiniteSizeResult out;
    out.eps_code = ec;
    out.eps_test = et;
    out.failure_probability = std::min(1.0, 5.0 * budget.delta);
    out.widened = w;
    out.result.phase_bound = sol.phase_bound;
    out.result.feasible = sol.feasible;
    out.result.key_rate = sol.feasible ? key_rate(w.fil_win, w.bit_win, sol.phase_bound) : 0.0;
    return out;
}

}  // namespace b92
