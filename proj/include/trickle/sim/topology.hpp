#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

namespace trickle::sim {

// All n nodes hear each other.
struct SingleCell {
    int n = 1;
};

// side x side lattice; node id = y * side + x. Two nodes hear each other
// when their (optionally toroidal) Euclidean distance is at most `range`.
struct Grid {
    int side = 1;
    double range = 1.0;
    double spacing = 1.0;
    bool toroidal = true;
};

using Topology = std::variant<SingleCell, Grid>;

void validate(const Topology& topology);

std::size_t node_count(const Topology& topology);

// Per-axis wraparound min(|d|, side*spacing - |d|) when toroidal.
double grid_distance(const Grid& grid, std::size_t a, std::size_t b);

// S(R): grid nodes within `range` of a fixed node. Counts the node itself
// unless include_self is false. For a non-toroidal grid the reference node
// is the one nearest the centre.
int cell_size(const Grid& grid, bool include_self = true);

// Who hears whom. Symmetric; a node is never its own neighbour.
class NeighborTable {
public:
    explicit NeighborTable(const Topology& topology);

    std::size_t size() const { return nodes_; }

    template <class F>
    void for_each_neighbor(std::size_t node, F&& f) const {
        if (!grid_) {
            for (std::size_t j = 0; j < nodes_; ++j) {
                if (j != node) f(j);
            }
            return;
        }
        const int side = side_;
        const int x = static_cast<int>(node % static_cast<std::size_t>(side));
        const int y = static_cast<int>(node / static_cast<std::size_t>(side));
        for (const auto& [dx, dy] : offsets_) {
            int nx = x + dx;
            int ny = y + dy;
            if (toroidal_) {
                nx %= side;
                ny %= side;
            } else if (nx < 0 || ny < 0 || nx >= side || ny >= side) {
                continue;
            }
            f(static_cast<std::size_t>(ny) * static_cast<std::size_t>(side) + static_cast<std::size_t>(nx));
        }
    }

    std::vector<std::size_t> neighbors(std::size_t node) const;

private:
    std::size_t nodes_ = 0;
    bool grid_ = false;
    bool toroidal_ = true;
    int side_ = 0;
    // Toroidal: distinct offsets in [0, side)^2. Planar: signed offsets.
    std::vector<std::pair<int, int>> offsets_;
};

} // namespace trickle::sim
