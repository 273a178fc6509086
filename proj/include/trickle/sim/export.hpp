#pragma once

#include <ostream>

#include "trickle/sim/simulator.hpp"

namespace trickle::sim {

// CSV with header `time,node_id`.
void write_transmissions_csv(std::ostream& os, const SimStats& stats);

// CSV with header `interval_index,count`.
void write_interval_counts_csv(std::ostream& os, const SimStats& stats);

// CSV with header `gap`.
void write_gaps_csv(std::ostream& os, const SimStats& stats);

} // namespace trickle::sim
