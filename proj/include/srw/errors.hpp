#pragma once

#include <stdexcept>

namespace srw {

// Reinforcement function or domain object violates a structural requirement
// (e.g. f(l) < -1 where the tail product is still positive).
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Experiment configuration rejected before any simulation starts.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A moment condition required by the requested quantity does not hold
// (e.g. E(T^2) = inf for the persistent diffusion constant).
struct regime_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A sampled run time reached the configured hard cap.
struct cap_exceeded_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Moment summation exhausted its iteration budget before the tail could be
// resolved to a usable precision.
struct indeterminate_moment_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace srw
