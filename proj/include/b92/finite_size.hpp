#pragma once

#include "b92/observables.hpp"
#include "b92/params.hpp"
#include "b92/phase_bound.hpp"

// Azuma-inequality deviation bounds: for N pairs split into code (1-t) and
// test (t) populations, a monitored rate differs from its conditional-
// probability average by more than epsilon with probability at most
// 2 exp(-N (1-t)^2 eps^2 / 2) (code) or 2 exp(-N t^2 eps^2 / 2) (test).

namespace b92 {

enum class Population { code, test };

/// Smallest epsilon whose tail bound is <= delta.
double deviation(double n_pairs, double t, double delta, Population population);

struct AzumaBudget {
    double n_pairs;
    double t;
    double delta;  // per-quantity failure probability

    double epsilon_code() const { return deviation(n_pairs, t, delta, Population::code); }
    double epsilon_test() const { return deviation(n_pairs, t, delta, Population::test); }
};

struct FiniteSizeResult {
    KeyRateResult result;
    double eps_code;
    double eps_test;
    double failure_probability;  // union bound over the monitored quantities
    Observables widened;
};

/// Widens the five monitored quantities in the worst-case direction
/// (fil_win down, fil_all up, bit_all up, eta~ down, alpha~^2 both ways via
/// the test-population epsilon), clamps anything leaving [0,1] to the valid
/// endpoint, and runs the asymptotic pipeline on the result. With two_eta set
/// the test-pair eta~^(t) slot is widened with the test-population epsilon
/// instead of sharing the code-widened value.
FiniteSizeResult finite_size_key_rate(const Observables& obs, double alpha_tilde_sq,
                                      const AzumaBudget& budget, const QubitConstants& q_f,
                                      const CPrimeSplit& c_split, bool two_eta = false);

}  // namespace b92
