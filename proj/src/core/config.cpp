#include "trickle/core/config.hpp"

#include <cmath>
#include <sstream>

namespace trickle {

void TrickleConfig::validate() const {
    if (k < 1) {
        throw ConfigError("k must be >= 1, got " + std::to_string(k));
    }
    if (!(tau_l > 0.0) || !std::isfinite(tau_l)) {
        throw ConfigError("tau_l must be a positive finite number");
    }
    if (!(tau_h >= tau_l) || !std::isfinite(tau_h)) {
        throw ConfigError("tau_h must be finite and >= tau_l");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw ConfigError("eta must lie in [0, 1]");
    }
}

std::string TrickleConfig::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "k=" << k << " tau_l=" << tau_l << " tau_h=" << tau_h << " eta=" << eta;
    return os.str();
}

} // namespace trickle
