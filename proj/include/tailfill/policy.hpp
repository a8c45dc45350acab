#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tailfill/errors.hpp"

namespace tailfill {

// Everything the per-user power decision depends on: the realized gain, the
// rate target t, the duals, the confidence level and the link noise.
struct PolicyInputs {
    double gain;            // h > 0
    double target;          // t, in nats
    double lambda;          // rate multiplier, >= 0
    double mu;              // power multiplier, >= 0
    double alpha;           // confidence in (0,1]
    double noise_variance;  // sigma^2 > 0
};

enum class PolicyBranch {
    zero,          // both duals zero: transmitting buys nothing
    waterfilling,  // gain below the crossover: [lambda/(mu alpha) - sigma^2/h]_+
    rate_cap,      // gain above the crossover: power that makes the rate hit t exactly
};

struct PolicyDecision {
    double power;
    PolicyBranch branch;
};

namespace detail {

inline double waterfilling_power(const PolicyInputs& in) {
    return std::max(in.lambda / (in.mu * in.alpha) - in.noise_variance / in.gain, 0.0);
}

// sigma^2 (e^t - 1) / h, clamped: a negative target would ask for negative
// power, and p = 0 is then optimal on the feasible set.
inline double rate_cap_power(const PolicyInputs& in) {
    return std::max(in.noise_variance * std::expm1(in.target), 0.0) / in.gain;
}

// Closed-form optimum of the per-user subproblem, with a branch-bias knob
// used only by the oracle's mutation mode to prove the check can fail.
inline PolicyDecision evaluate_policy_biased(const PolicyInputs& in, double branch_scale) {
    if (in.mu == 0.0 && in.lambda == 0.0) return {0.0, PolicyBranch::zero};
    if (in.mu == 0.0) {
        // lambda/(mu alpha) -> +inf selects the rate-cap side
        double p = rate_cap_power(in);
        if (!std::isfinite(p)) throw NonFiniteResult("rate-cap power overflowed");
        return {p, PolicyBranch::rate_cap};
    }
    const bool upper =
        branch_scale * in.lambda / (in.mu * in.alpha * std::exp(in.target)) -
            in.noise_variance / in.gain <
        0.0;
    double p = upper ? waterfilling_power(in) : rate_cap_power(in);
    if (!std::isfinite(p)) throw NonFiniteResult("policy power overflowed");
    return {p, upper ? PolicyBranch::waterfilling : PolicyBranch::rate_cap};
}

}  // namespace detail

/// Optimal power for one user given the current primal/dual state. The branch
/// test compares the gain against the crossover sigma^2 mu alpha e^t / lambda;
/// below it the policy waterfills against the level lambda/(mu alpha), above
/// it the policy spends exactly enough to cap the rate at t.
inline PolicyDecision evaluate_policy(const PolicyInputs& in) {
    return detail::evaluate_policy_biased(in, 1.0);
}

inline double optimal_power(const PolicyInputs& in) {
    return evaluate_policy(in).power;
}

/// Classical risk-neutral waterfilling [lambda/mu - sigma^2/h]_+.
inline double riskneutral_power(double gain, double lambda, double mu, double noise_variance) {
    if (mu == 0.0) {
        if (lambda == 0.0) return 0.0;
        throw DegenerateDuals();
    }
    return std::max(lambda / mu - noise_variance / gain, 0.0);
}

/// Value of the per-user subproblem objective
///   -mu p - (lambda/alpha) (t - log(1 + h p / sigma^2))_+
/// at an arbitrary feasible power.
inline double subproblem_objective(double power, const PolicyInputs& in) {
    const double rate = std::log1p(in.gain * power / in.noise_variance);
    return -in.mu * power -
           in.lambda / in.alpha * std::max(in.target - rate, 0.0);
}

/// Exhaustive search over the grid {0, p_max/steps, ..., p_max}; ties keep the
/// smallest power. Independent certificate for evaluate_policy: callers must
/// pick p_max >= 2 (optimal_power + 1) so the optimum is interior.
inline double grid_argmax_power(const PolicyInputs& in, double p_max, std::size_t steps) {
    const double step = p_max / double(steps);
    double best_p = 0.0;
    double best_v = subproblem_objective(0.0, in);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double p = double(k) * step;
        const double v = subproblem_objective(p, in);
        if (v > best_v) {
            best_v = v;
            best_p = p;
        }
    }
    return best_p;
}

}  // namespace tailfill
