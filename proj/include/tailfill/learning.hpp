#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tailfill/channel.hpp"
#include "tailfill/config.hpp"
#include "tailfill/errors.hpp"
#include "tailfill/policy.hpp"

namespace tailfill {

// Value of the Heaviside selection at the kink t = r. Zero makes the expected
// t-subgradient vanish exactly where the strictly-below-target probability
// equals alpha, which is the quantile optimality condition; the rate-cap
// branch lands on the kink by construction, so any other selection would bias
// the target downward. Overridable per call for experimentation.
inline constexpr double heaviside_at_kink = 0.0;

// x* = 1/lambda must stay finite under proportional fairness; transients that
// drive lambda below this floor abort the run.
inline constexpr double lambda_floor = 1e-6;

struct PrimalState {
    std::vector<double> targets;        // t
    std::vector<double> rates_ergodic;  // x
};

struct DualState {
    std::vector<double> lambdas;
    double mu = 0.0;
};

struct IterationRecord {
    std::uint64_t index = 0;  // 1-based
    std::vector<double> gains;
    std::vector<double> powers;
    std::vector<double> rates;
    PrimalState primal;  // state after this iteration's updates
    DualState dual;
};

struct Trajectory {
    std::vector<IterationRecord> records;
    NetworkConfig network;
    RunConfig run;
    std::uint64_t seed = 0;
    PrimalState initial_primal;
    DualState initial_dual;
};

/// Shannon rate log(1 + h p / sigma^2), in nats.
inline double instantaneous_rate(double gain, double power, double noise_variance) {
    return std::log1p(gain * power / noise_variance);
}

namespace detail {

// Heaviside of t - r for the t-subgradient. On the rate-cap branch with
// positive power the rate equals the target by construction, so the kink
// selection applies directly instead of trusting the rounded difference.
inline double heaviside_term(const PolicyDecision& decision, double target, double rate,
                             double kink) {
    if (decision.branch == PolicyBranch::rate_cap && decision.power > 0.0) return kink;
    const double diff = target - rate;
    if (diff > 0.0) return 1.0;
    if (diff < 0.0) return 0.0;
    return kink;
}

inline double t_subgradient_from(const PolicyDecision& decision, const PolicyInputs& in,
                                 double rate, double kink) {
    return in.lambda - in.lambda / in.alpha * heaviside_term(decision, in.target, rate, kink);
}

}  // namespace detail

/// Stochastic subgradient of the t-subproblem at the current state:
/// lambda - (lambda/alpha) H[t - r(p*)], where p* is the closed-form optimal
/// power for these inputs and H is the step function with H(0) = kink.
inline double t_subgradient(double gain, double target, double lambda, double mu, double alpha,
                            double noise_variance, double kink = heaviside_at_kink) {
    const PolicyInputs in{gain, target, lambda, mu, alpha, noise_variance};
    const PolicyDecision d = evaluate_policy(in);
    const double rate = instantaneous_rate(gain, d.power, noise_variance);
    return detail::t_subgradient_from(d, in, rate, kink);
}

/// Ascent step on the (unconstrained) CV@R target.
inline double update_t(double target, double subgradient, double step_t) {
    return target + step_t * subgradient;
}

/// Projected descent on the power multiplier using this realization's total
/// allocated power as the stochastic constraint gap.
inline double update_mu(double mu, double total_power, double power_budget, double step_mu) {
    return std::max(mu - step_mu * (power_budget - total_power), 0.0);
}

/// Projected descent on one rate multiplier (proportional fairness only).
inline double update_lambda(double lambda, double x, double target, double rate, double alpha,
                            double step_lambda) {
    const double gap = -x + target - std::max(target - rate, 0.0) / alpha;
    return std::max(lambda - step_lambda * gap, 0.0);
}

/// Maximizer of f0(x) - Lambda^T x. Proportional fairness gives x_i =
/// 1/lambda_i; weighted sumrate returns nullopt because the maximization pins
/// Lambda = w and eliminates x as a decision variable (metrics report it post
/// hoc as the empirical lower CV@R of the rates).
inline std::optional<std::vector<double>> utility_x_argmax(Utility utility, const DualState& dual,
                                                           std::span<const double> weights) {
    (void)weights;
    if (utility == Utility::weighted_sumrate) return std::nullopt;
    std::vector<double> x;
    x.reserve(dual.lambdas.size());
    for (std::size_t i = 0; i < dual.lambdas.size(); ++i) {
        if (dual.lambdas[i] < lambda_floor) throw LambdaUnderflow(i, dual.lambdas[i]);
        x.push_back(1.0 / dual.lambdas[i]);
    }
    return x;
}

// Sources of fading realizations for the learning loop.
class FadingSource {
  public:
    virtual ~FadingSource() = default;
    virtual FadingSample next() = 0;
};

class RngFadingSource final : public FadingSource {
  public:
    RngFadingSource(const NetworkConfig& network, std::uint64_t seed)
        : network_(network), rng_(seed, network.users.size()) {}
    FadingSample next() override { return sample_fading(network_, rng_); }

  private:
    NetworkConfig network_;
    RngState rng_;
};

// Replays a pre-materialized sequence; both legs of a paired comparison read
// the same one, which guarantees bit-identical fading across the legs.
class ReplayFadingSource final : public FadingSource {
  public:
    explicit ReplayFadingSource(std::vector<FadingSample> samples)
        : samples_(std::move(samples)) {}
    FadingSample next() override {
        if (pos_ >= samples_.size()) throw ReplayExhausted();
        return samples_[pos_++];
    }

  private:
    std::vector<FadingSample> samples_;
    std::size_t pos_ = 0;
};

namespace detail {

inline void check_finite_state(std::uint64_t iteration, const IterationRecord& rec) {
    auto all_finite = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };
    if (!all_finite(rec.powers)) throw NonFiniteState(iteration, "power");
    if (!all_finite(rec.rates)) throw NonFiniteState(iteration, "rate");
    if (!all_finite(rec.primal.targets)) throw NonFiniteState(iteration, "t");
    if (!all_finite(rec.primal.rates_ergodic)) throw NonFiniteState(iteration, "x");
    if (!all_finite(rec.dual.lambdas)) throw NonFiniteState(iteration, "lambda");
    if (!std::isfinite(rec.dual.mu)) throw NonFiniteState(iteration, "mu");
}

}  // namespace detail

/// One full primal-dual run, streaming each completed IterationRecord into
/// `sink`. Per iteration n: observe h^n; evaluate the closed-form policy at
/// the (n-1)-state; ascend t on its stochastic subgradient; obtain
/// x*(Lambda^{n-1}); descend mu on the power gap; descend Lambda on the
/// CV@R-constraint gap (proportional fairness only). Risk-neutral mode forces
/// alpha = 1, freezes t and draws powers from the classical waterfilling
/// formula. Deterministic given the source.
///
/// Throws LambdaUnderflow / NonFiniteState with the failing iteration index;
/// records already handed to the sink remain usable as partial output.
template <typename Sink>
void run_tail_waterfilling_into(const NetworkConfig& network, const RunConfig& run,
                                FadingSource& source, Sink&& sink) {
    const std::size_t n = network.users.size();
    const bool risk_neutral = run.mode == RunMode::risk_neutral;
    const bool pf = network.utility == Utility::proportional_fairness;
    const std::vector<double> weights = sumrate_weights(network);

    std::vector<double> t(n, run.init_t);
    double mu = run.init_mu;
    std::vector<double> lambda = pf ? std::vector<double>(n, run.init_lambda) : weights;

    std::vector<double> alphas(n);
    for (std::size_t i = 0; i < n; ++i)
        alphas[i] = risk_neutral ? 1.0 : network.users[i].confidence;

    auto record_x = [&](const std::vector<double>& lam) {
        // recorded x is consistent with the recorded lambda, so x_i lambda_i = 1
        // holds at every record under proportional fairness
        std::vector<double> x(n, 0.0);
        if (pf)
            for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / lam[i];
        return x;
    };

    traj.initial_primal = {t, record_x(lambda)};
    traj.initial_dual = {lambda, mu};
    traj.records.reserve(run.iterations);

    std::vector<double> gains(n), powers(n), rates(n), t_next(n);
    std::vector<PolicyDecision> decisions(n);

    for (std::uint64_t iter = 1; iter <= run.iterations; ++iter) {
        try {
            FadingSample h = source.next();
            for (std::size_t i = 0; i < n; ++i) {
                gains[i] = h.gains[i];
                const PolicyInputs in{gains[i], t[i], lambda[i], mu, alphas[i],
                                      network.users[i].noise_variance};
                if (risk_neutral) {
                    decisions[i] = {riskneutral_power(gains[i], lambda[i], mu,
                                                      network.users[i].noise_variance),
                                    PolicyBranch::waterfilling};
                } else {
                    decisions[i] = evaluate_policy(in);
                }
                powers[i] = decisions[i].power;
                if (run.instantaneous_power_cap)
                    powers[i] = std::min(powers[i], *run.instantaneous_power_cap);
                rates[i] = instantaneous_rate(gains[i], powers[i],
                                              network.users[i].noise_variance);
            }

            if (risk_neutral) {
                t_next = t;
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    const PolicyInputs in{gains[i], t[i], lambda[i], mu, alphas[i],
                                          network.users[i].noise_variance};
                    // if the cap reduced the power, the realized rate left the
                    // kink, so the sign test applies
                    PolicyDecision d = decisions[i];
                    if (powers[i] < d.power) d = {powers[i], PolicyBranch::waterfilling};
                    const double g = detail::t_subgradient_from(d, in, rates[i], heaviside_at_kink);
                    t_next[i] = update_t(t[i], g, run.step_t);
                }
            }

            const auto x_opt = utility_x_argmax(network.utility, {lambda, mu}, weights);

            double total_power = 0.0;
            for (double p : powers) total_power += p;
            mu = update_mu(mu, total_power, network.power_budget, run.step_mu);

            if (pf)
                for (std::size_t i = 0; i < n; ++i)
                    lambda[i] = update_lambda(lambda[i], (*x_opt)[i], t[i], rates[i], alphas[i],
                                              run.step_lambda);
            t = t_next;

            if (pf)
                for (std::size_t i = 0; i < n; ++i)
                    if (lambda[i] < lambda_floor) throw LambdaUnderflow(i, lambda[i]);

            IterationRecord rec{iter, gains, powers, rates, {t, record_x(lambda)}, {lambda, mu}};
            detail::check_finite_state(iter, rec);
            traj.records.push_back(std::move(rec));
        } catch (NonFiniteResult& e) {
            throw NonFiniteState(iter, e.what());
        } catch (LambdaUnderflow& e) {
            e.iteration = iter;
            throw;
        }
    }
    return traj;
}

inline Trajectory run_tail_waterfilling(const NetworkConfig& network, const RunConfig& run) {
    RngFadingSource source(network, run.seed);
    return run_tail_waterfilling(network, run, source);
}

}  // namespace tailfill
