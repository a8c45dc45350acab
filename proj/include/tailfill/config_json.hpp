#pragma once

#include <set>
#include <string>

#include <json.hpp>

#include "tailfill/config.hpp"
#include "tailfill/errors.hpp"

namespace tailfill {

namespace detail {

// Typed field access over a JSON object that rejects unknown keys, so typos
// in experiment files fail loudly instead of silently using defaults.
class StrictObject {
  public:
    StrictObject(const nlohmann::json& j, std::string where) : json_(j), where_(std::move(where)) {
        if (!j.is_object()) throw InputFormatError(where_ + ": expected a JSON object");
    }

    template <typename T>
    T require(const std::string& key) {
        auto it = json_.find(key);
        if (it == json_.end())
            throw InputFormatError(where_ + ": missing required field '" + key + "'");
        seen_.insert(key);
        return get<T>(*it, key);
    }

    template <typename T>
    T get_or(const std::string& key, T fallback) {
        auto it = json_.find(key);
        if (it == json_.end()) return fallback;
        seen_.insert(key);
        return get<T>(*it, key);
    }

    bool has(const std::string& key) {
        if (json_.contains(key)) {
            seen_.insert(key);
            return true;
        }
        return false;
    }

    const nlohmann::json& raw(const std::string& key) {
        seen_.insert(key);
        return json_.at(key);
    }

    // Call once all expected keys were consumed.
    void reject_unknown() const {
        for (auto it = json_.begin(); it != json_.end(); ++it)
            if (!seen_.count(it.key()))
                throw InputFormatError(where_ + ": unknown field '" + it.key() + "'");
    }

  private:
    template <typename T>
    T get(const nlohmann::json& v, const std::string& key) const {
        try {
            return v.get<T>();
        } catch (const nlohmann::json::exception&) {
            throw InputFormatError(where_ + ": field '" + key + "' has the wrong type");
        }
    }

    const nlohmann::json& json_;
    std::string where_;
    std::set<std::string> seen_;
};

}  // namespace detail

inline Utility utility_from_string(const std::string& s, const std::string& where) {
    if (s == "weighted_sumrate") return Utility::weighted_sumrate;
    if (s == "proportional_fairness") return Utility::proportional_fairness;
    throw InputFormatError(where + ": unknown utility '" + s +
                           "' (expected weighted_sumrate or proportional_fairness)");
}

inline RunMode mode_from_string(const std::string& s, const std::string& where) {
    if (s == "risk_aware") return RunMode::risk_aware;
    if (s == "risk_neutral") return RunMode::risk_neutral;
    throw InputFormatError(where + ": unknown mode '" + s +
                           "' (expected risk_aware or risk_neutral)");
}

inline NetworkConfig network_from_json(const nlohmann::json& j, const std::string& where = "network") {
    detail::StrictObject obj(j, where);
    NetworkConfig net;
    const nlohmann::json& users = obj.raw("users");
    if (!users.is_array()) throw InputFormatError(where + ".users: expected an array");
    for (std::size_t i = 0; i < users.size(); ++i) {
        detail::StrictObject uo(users[i], where + ".users[" + std::to_string(i) + "]");
        UserConfig u;
        u.noise_variance = uo.require<double>("noise_variance");
        u.confidence = uo.require<double>("confidence");
        u.fading_scale = uo.get_or<double>("fading_scale", 1.0);
        u.weight = uo.get_or<double>("weight", 0.0);
        uo.reject_unknown();
        net.users.push_back(u);
    }
    net.power_budget = obj.require<double>("power_budget");
    net.utility = utility_from_string(obj.require<std::string>("utility"), where + ".utility");
    obj.reject_unknown();
    return net;
}

inline RunConfig run_from_json(const nlohmann::json& j, std::size_t user_count,
                               const std::string& where = "run") {
    detail::StrictObject obj(j, where);
    RunConfig run;
    run.iterations = obj.require<std::uint64_t>("iterations");
    run.step_t = obj.require<double>("step_t");
    run.step_mu = obj.require<double>("step_mu");
    run.step_lambda = obj.require<double>("step_lambda");
    run.seed = obj.require<std::uint64_t>("seed");
    run.burn_in_fraction = obj.get_or<double>("burn_in_fraction", 0.2);
    run.init_t = obj.get_or<double>("init_t", 1.0);
    run.init_mu = obj.get_or<double>("init_mu", 0.1);
    run.init_lambda =
        obj.get_or<double>("init_lambda", user_count > 0 ? 1.0 / double(user_count) : 1.0);
    run.mode = mode_from_string(obj.get_or<std::string>("mode", "risk_aware"), where + ".mode");
    if (obj.has("instantaneous_power_cap") && !obj.raw("instantaneous_power_cap").is_null())
        run.instantaneous_power_cap = obj.raw("instantaneous_power_cap").get<double>();
    obj.reject_unknown();
    return run;
}

inline nlohmann::ordered_json network_to_json(const NetworkConfig& net) {
    nlohmann::ordered_json j;
    j["users"] = nlohmann::ordered_json::array();
    for (const UserConfig& u : net.users)
        j["users"].push_back({{"noise_variance", u.noise_variance},
                              {"confidence", u.confidence},
                              {"fading_scale", u.fading_scale},
                              {"weight", u.weight}});
    j["power_budget"] = net.power_budget;
    j["utility"] = to_string(net.utility);
    return j;
}

inline nlohmann::ordered_json run_to_json(const RunConfig& run) {
    nlohmann::ordered_json j;
    j["iterations"] = run.iterations;
    j["burn_in_fraction"] = run.burn_in_fraction;
    j["step_t"] = run.step_t;
    j["step_mu"] = run.step_mu;
    j["step_lambda"] = run.step_lambda;
    j["seed"] = run.seed;
    j["init_t"] = run.init_t;
    j["init_mu"] = run.init_mu;
    j["init_lambda"] = run.init_lambda;
    j["mode"] = to_string(run.mode);
    if (run.instantaneous_power_cap) j["instantaneous_power_cap"] = *run.instantaneous_power_cap;
    return j;
}

}  // namespace tailfill
