#include "trickle/analytics/export.hpp"

#include "trickle/numeric/format.hpp"

namespace trickle::analytics {

void write_curve_csv(std::ostream& os, std::span<const double> grid, const std::function<double(double)>& f) {
    os << "t,value\n";
    for (double t : grid) os << numeric::format_real(t) << ',' << numeric::format_real(f(t)) << '\n';
}

void write_moment_table_csv(std::ostream& os, std::span<const MomentRow> rows) {
    os << "j,value,reference,rel_err\n";
    for (const auto& r : rows) {
        os << r.j << ',' << numeric::format_real(r.value) << ',' << numeric::format_real(r.reference) << ','
           << numeric::format_real(r.rel_err) << '\n';
    }
}

} // namespace trickle::analytics
