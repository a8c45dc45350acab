#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tailfill {

// Thrown by the risk estimators.
struct EmptySample : std::invalid_argument {
    EmptySample() : std::invalid_argument("sample is empty") {}
};

struct AlphaOutOfRange : std::invalid_argument {
    explicit AlphaOutOfRange(double alpha)
        : std::invalid_argument("confidence level must lie in (0,1], got " + std::to_string(alpha)),
          alpha(alpha) {}
    double alpha;
};

struct QOutOfRange : std::invalid_argument {
    explicit QOutOfRange(double q)
        : std::invalid_argument("quantile probability must lie in (0,1), got " + std::to_string(q)),
          q(q) {}
    double q;
};

// Risk-neutral waterfilling has no finite waterlevel when mu = 0 with lambda > 0.
struct DegenerateDuals : std::domain_error {
    DegenerateDuals() : std::domain_error("waterlevel lambda/mu undefined: mu = 0 with lambda > 0") {}
};

// A policy evaluation produced a non-finite value from finite inputs (overflow).
struct NonFiniteResult : std::runtime_error {
    explicit NonFiniteResult(const std::string& what) : std::runtime_error(what) {}
};

// Errors raised while running the learning recursion. `partial` (filled in by
// the driver) carries the records produced before the failure so callers can
// still persist them.
struct LambdaUnderflow : std::runtime_error {
    LambdaUnderflow(std::size_t user, double value)
        : std::runtime_error("lambda for user " + std::to_string(user) +
                             " fell below the proportional-fairness floor (" +
                             std::to_string(value) + ")"),
          user(user), value(value) {}
    std::size_t user;
    double value;
    std::uint64_t iteration = 0;
};

struct NonFiniteState : std::runtime_error {
    explicit NonFiniteState(std::uint64_t iteration, const std::string& detail)
        : std::runtime_error("non-finite state at iteration " + std::to_string(iteration) +
                             ": " + detail),
          iteration(iteration) {}
    std::uint64_t iteration;
};

struct EmptyAfterBurnIn : std::runtime_error {
    EmptyAfterBurnIn() : std::runtime_error("no records remain after burn-in") {}
};

// Malformed replay/experiment input files.
struct InputFormatError : std::runtime_error {
    explicit InputFormatError(const std::string& what) : std::runtime_error(what) {}
};

struct ReplayExhausted : std::runtime_error {
    ReplayExhausted() : std::runtime_error("replay fading source ran out of samples") {}
};

}  // namespace tailfill
