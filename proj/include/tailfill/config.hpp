#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tailfill/errors.hpp"

namespace tailfill {

enum class Utility { weighted_sumrate, proportional_fairness };
enum class RunMode { risk_aware, risk_neutral };

// Static description of one point-to-point link.
struct UserConfig {
    double noise_variance = 1.0;  // linear power units
    double confidence = 1.0;      // CV@R level in (0,1]; 1 = risk-neutral
    double fading_scale = 1.0;    // Rayleigh scale of the channel gain
    double weight = 0.0;          // sumrate weight, unused under proportional fairness
};

struct NetworkConfig {
    std::vector<UserConfig> users;
    double power_budget = 0.0;  // mean total transmit power
    Utility utility = Utility::weighted_sumrate;
};

struct RunConfig {
    std::uint64_t iterations = 0;
    double burn_in_fraction = 0.2;
    double step_t = 0.0;
    double step_mu = 0.0;
    double step_lambda = 0.0;
    std::uint64_t seed = 0;
    double init_t = 1.0;
    double init_mu = 0.1;
    double init_lambda = 0.0;  // 0 means "set to 1/n at load time"
    RunMode mode = RunMode::risk_aware;
    std::optional<double> instantaneous_power_cap;
};

enum class ConfigErrorCode {
    NonPositiveNoise,
    ConfidenceOutOfRange,
    NonPositiveFadingScale,
    NegativeWeight,
    EmptyUsers,
    AllZeroWeights,
    NonPositiveBudget,
    NonPositiveStepsize,
    NegativeInitialDual,
    BurnInOutOfRange,
    NonPositivePowerCap,
};

struct ConfigViolation {
    ConfigErrorCode code;
    std::string field;
    std::optional<std::size_t> user;  // absent for network/run-level fields

    std::string message() const {
        std::string m = field;
        if (user) m += " (user " + std::to_string(*user) + ")";
        switch (code) {
            case ConfigErrorCode::NonPositiveNoise: return m + ": noise variance must be > 0";
            case ConfigErrorCode::ConfidenceOutOfRange: return m + ": confidence must lie in (0,1]";
            case ConfigErrorCode::NonPositiveFadingScale: return m + ": fading scale must be > 0";
            case ConfigErrorCode::NegativeWeight: return m + ": weight must be >= 0";
            case ConfigErrorCode::EmptyUsers: return m + ": at least one user is required";
            case ConfigErrorCode::AllZeroWeights:
                return m + ": weighted sumrate needs at least one positive weight";
            case ConfigErrorCode::NonPositiveBudget: return m + ": power budget must be > 0";
            case ConfigErrorCode::NonPositiveStepsize: return m + ": stepsizes must be > 0";
            case ConfigErrorCode::NegativeInitialDual: return m + ": initial duals must be >= 0";
            case ConfigErrorCode::BurnInOutOfRange: return m + ": burn-in fraction must lie in [0,1)";
            case ConfigErrorCode::NonPositivePowerCap: return m + ": power cap must be > 0";
        }
        return m;
    }
};

/// Checks every type invariant and returns the full list of violations
/// (empty means the pair is valid). Pure: the configs are not modified,
/// so validating twice gives the same answer.
inline std::vector<ConfigViolation> validate_config(const NetworkConfig& network,
                                                    const RunConfig& run) {
    std::vector<ConfigViolation> out;
    if (network.users.empty())
        out.push_back({ConfigErrorCode::EmptyUsers, "network.users", std::nullopt});
    bool any_weight = false;
    for (std::size_t i = 0; i < network.users.size(); ++i) {
        const UserConfig& u = network.users[i];
        if (!(u.noise_variance > 0.0))
            out.push_back({ConfigErrorCode::NonPositiveNoise, "noise_variance", i});
        if (!(u.confidence > 0.0 && u.confidence <= 1.0))
            out.push_back({ConfigErrorCode::ConfidenceOutOfRange, "confidence", i});
        if (!(u.fading_scale > 0.0))
            out.push_back({ConfigErrorCode::NonPositiveFadingScale, "fading_scale", i});
        if (u.weight < 0.0)
            out.push_back({ConfigErrorCode::NegativeWeight, "weight", i});
        if (u.weight > 0.0) any_weight = true;
    }
    if (network.utility == Utility::weighted_sumrate && !network.users.empty() && !any_weight)
        out.push_back({ConfigErrorCode::AllZeroWeights, "users[].weight", std::nullopt});
    if (!(network.power_budget > 0.0))
        out.push_back({ConfigErrorCode::NonPositiveBudget, "power_budget", std::nullopt});

    if (!(run.step_t > 0.0))
        out.push_back({ConfigErrorCode::NonPositiveStepsize, "step_t", std::nullopt});
    if (!(run.step_mu > 0.0))
        out.push_back({ConfigErrorCode::NonPositiveStepsize, "step_mu", std::nullopt});
    if (!(run.step_lambda > 0.0))
        out.push_back({ConfigErrorCode::NonPositiveStepsize, "step_lambda", std::nullopt});
    if (run.init_mu < 0.0)
        out.push_back({ConfigErrorCode::NegativeInitialDual, "init_mu", std::nullopt});
    if (run.init_lambda < 0.0)
        out.push_back({ConfigErrorCode::NegativeInitialDual, "init_lambda", std::nullopt});
    if (!(run.burn_in_fraction >= 0.0 && run.burn_in_fraction < 1.0))
        out.push_back({ConfigErrorCode::BurnInOutOfRange, "burn_in_fraction", std::nullopt});
    if (run.instantaneous_power_cap && !(*run.instantaneous_power_cap > 0.0))
        out.push_back({ConfigErrorCode::NonPositivePowerCap, "instantaneous_power_cap", std::nullopt});
    return out;
}

inline bool is_valid(const NetworkConfig& network, const RunConfig& run) {
    return validate_config(network, run).empty();
}

inline const char* to_string(Utility u) {
    return u == Utility::weighted_sumrate ? "weighted_sumrate" : "proportional_fairness";
}

inline const char* to_string(RunMode m) {
    return m == RunMode::risk_aware ? "risk_aware" : "risk_neutral";
}

inline std::vector<double> sumrate_weights(const NetworkConfig& network) {
    std::vector<double> w;
    w.reserve(network.users.size());
    for (const UserConfig& u : network.users) w.push_back(u.weight);
    return w;
}

}  // namespace tailfill
