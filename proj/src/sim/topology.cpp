#include "trickle/sim/topology.hpp"

#include <cmath>
#include <cstdlib>

#include "trickle/core/config.hpp"

namespace trickle::sim {

namespace {

// Squared-distance comparison with a relative slack so lattice points lying
// exactly on the circle (e.g. R = 1, R = sqrt(2)) are counted.
bool within(double dx, double dy, double range) {
    const double d2 = dx * dx + dy * dy;
    return d2 <= range * range * (1.0 + 1e-12);
}

double axis_delta(const Grid& g, int a, int b) {
    double d = std::abs(a - b) * g.spacing;
    if (g.toroidal) d = std::min(d, g.side * g.spacing - d);
    return d;
}

} // namespace

void validate(const Topology& topology) {
    if (const auto* cell = std::get_if<SingleCell>(&topology)) {
        if (cell->n < 1) throw ConfigError("single cell needs n >= 1");
        return;
    }
    const auto& g = std::get<Grid>(topology);
    if (g.side < 1) throw ConfigError("grid side must be >= 1");
    if (!(g.range > 0.0)) throw ConfigError("grid range must be > 0");
    if (!(g.spacing > 0.0)) throw ConfigError("grid spacing must be > 0");
}

std::size_t node_count(const Topology& topology) {
    if (const auto* cell = std::get_if<SingleCell>(&topology)) {
        return static_cast<std::size_t>(cell->n);
    }
    const auto& g = std::get<Grid>(topology);
    return static_cast<std::size_t>(g.side) * static_cast<std::size_t>(g.side);
}

double grid_distance(const Grid& grid, std::size_t a, std::size_t b) {
    const auto side = static_cast<std::size_t>(grid.side);
    const double dx = axis_delta(grid, static_cast<int>(a % side), static_cast<int>(b % side));
    const double dy = axis_delta(grid, static_cast<int>(a / side), static_cast<int>(b / side));
    return std::hypot(dx, dy);
}

int cell_size(const Grid& grid, bool include_self) {
    validate(Topology{grid});
    const int c = grid.side / 2;
    int count = 0;
    for (int y = 0; y < grid.side; ++y) {
        for (int x = 0; x < grid.side; ++x) {
            if (x == c && y == c && !include_self) continue;
            if (within(axis_delta(grid, x, c), axis_delta(grid, y, c), grid.range)) ++count;
        }
    }
    return count;
}

NeighborTable::NeighborTable(const Topology& topology) {
    validate(topology);
    nodes_ = node_count(topology);
    const auto* g = std::get_if<Grid>(&topology);
    if (!g) return;
    grid_ = true;
    toroidal_ = g->toroidal;
    side_ = g->side;
    if (toroidal_) {
        for (int oy = 0; oy < side_; ++oy) {
            for (int ox = 0; ox < side_; ++ox) {
                if (ox == 0 && oy == 0) continue;
                if (within(axis_delta(*g, ox, 0), axis_delta(*g, oy, 0), g->range)) {
                    offsets_.emplace_back(ox, oy);
                }
            }
        }
    } else {
        for (int dy = -(side_ - 1); dy < side_; ++dy) {
            for (int dx = -(side_ - 1); dx < side_; ++dx) {
                if (dx == 0 && dy == 0) continue;
                if (within(dx * g->spacing, dy * g->spacing, g->range)) offsets_.emplace_back(dx, dy);
            }
        }
    }
}

std::vector<std::size_t> NeighborTable::neighbors(std::size_t node) const {
    std::vector<std::size_t> out;
    for_each_neighbor(node, [&](std::size_t j) { out.push_back(j); });
    return out;
}

} // namespace trickle::sim
