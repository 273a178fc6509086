#pragma once

#include <functional>
#include <ostream>
#include <span>

#include "trickle/analytics/limits.hpp"

namespace trickle::analytics {

// `t,value` for every t in the grid.
void write_curve_csv(std::ostream& os, std::span<const double> grid, const std::function<double(double)>& f);

// `j,value,reference,rel_err`
void write_moment_table_csv(std::ostream& os, std::span<const MomentRow> rows);

} // namespace trickle::analytics
