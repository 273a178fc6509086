#pragma once

#include <stdexcept>
#include <string>

namespace trickle {

// Raised for any parameter set that violates a documented invariant.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Protocol parameters shared by the simulator and the analytic model.
struct TrickleConfig {
    int k = 1;            // redundancy constant
    double tau_l = 1.0;   // minimum interval length
    double tau_h = 1.0;   // maximum interval length
    double eta = 0.0;     // listen-only fraction of each interval

    // Throws ConfigError unless k >= 1, 0 < tau_l <= tau_h and 0 <= eta <= 1.
    void validate() const;

    std::string describe() const;
};

} // namespace trickle
