#include "trickle/analytics/multicell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trickle/analytics/single_cell.hpp"
#include "trickle/core/config.hpp"
#include "trickle/numeric/special.hpp"

namespace trickle::analytics {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void GridParams::validate() const {
    if (side < 1) throw ConfigError("grid side must be >= 1");
    if (!(range > 0.0) || !std::isfinite(range)) throw ConfigError("range must be > 0");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
}

int continuum_cell_size(double range) {
    return std::max(1, static_cast<int>(std::lround(kPi * range * range)));
}

double multicell_estimate(const GridParams& g, int cell_size) {
    g.validate();
    if (cell_size < 1) throw ConfigError("cell size must be >= 1");
    const double nodes = static_cast<double>(g.side) * g.side;
    return nodes / cell_size * mean_N({g.k, static_cast<double>(cell_size), g.eta});
}

double multicell_large_range(const GridParams& g) {
    g.validate();
    const double nodes = static_cast<double>(g.side) * g.side;
    if (g.eta == 0.0) {
        return std::sqrt(2.0 / kPi) * nodes / g.range * numeric::gamma_ratio(0.5 * (g.k + 1), 0.5 * g.k);
    }
    return nodes / (g.range * g.range) * g.k / (kPi * g.eta);
}

double multicell_ratio(double simulated_mean, const GridParams& g, int cell_size) {
    if (!(simulated_mean > 0.0)) throw std::invalid_argument("multicell_ratio: simulated mean must be > 0");
    return simulated_mean / multicell_estimate(g, cell_size);
}

} // namespace trickle::analytics
