#include "trickle/sim/export.hpp"

#include "trickle/numeric/format.hpp"

namespace trickle::sim {

using numeric::format_real;

void write_transmissions_csv(std::ostream& os, const SimStats& stats) {
    os << "time,node_id\n";
    for (const auto& t : stats.transmission_times) os << format_real(t.time) << ',' << t.node << '\n';
}

void write_interval_counts_csv(std::ostream& os, const SimStats& stats) {
    os << "interval_index,count\n";
    for (std::size_t i = 0; i < stats.per_interval_counts.size(); ++i) {
        os << i << ',' << stats.per_interval_counts[i] << '\n';
    }
}

void write_gaps_csv(std::ostream& os, const SimStats& stats) {
    os << "gap\n";
    for (double g : stats.inter_transmission_times) os << format_real(g) << '\n';
}

} // namespace trickle::sim
