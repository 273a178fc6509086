#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration.
//
// Panels are kept in a max-heap keyed on their error estimate; the worst
// panel is bisected until the summed error satisfies
//     err <= max(abs_tol, rel_tol * |value|)
// or the panel budget is exhausted, in which case QuadratureError is thrown.
// Panels whose error estimate is already at rounding level are retired
// rather than bisected.
// An infinite upper limit is mapped onto [0, 1) with x = a + u / (1 - u).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace trickle::numeric {

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error) {}
    double estimate() const { return estimate_; }
    double error() const { return error_; }

private:
    double estimate_;
    double error_;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_panels = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
};

inline bool panel_less(const Panel& a, const Panel& b) { return a.error < b.error; }

template <class F>
Panel gk15_panel(F& f, double lo, double hi) {
    double err = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0, &err);
    // With max_depth = 0 boost 1.74 reports the error on the reference
    // interval [-1, 1]; rescale it to [lo, hi].
    err *= 0.5 * (hi - lo);
    if (!std::isfinite(value) || !std::isfinite(err)) {
        throw QuadratureError("non-finite integrand value on [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]",
                              value, err);
    }
    return {lo, hi, value, err};
}

// `cuts` must be sorted and finite; consecutive pairs form the initial panels.
template <class F>
QuadratureResult adaptive(F& f, const std::vector<double>& cuts, const QuadratureOptions& opt) {
    constexpr double kRoundoff = 100.0 * std::numeric_limits<double>::epsilon();
    std::vector<Panel> heap;
    std::vector<Panel> retired;
    heap.reserve(64);
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        heap.push_back(gk15_panel(f, cuts[i], cuts[i + 1]));
        total += heap.back().value;
        total_err += heap.back().error;
    }
    std::make_heap(heap.begin(), heap.end(), panel_less);

    double retired_err = 0.0;
    while (!heap.empty() && total_err - retired_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (heap.size() + retired.size() >= opt.max_panels) {
            throw QuadratureError("quadrature did not converge within panel budget", total, total_err);
        }
        std::pop_heap(heap.begin(), heap.end(), panel_less);
        const Panel worst = heap.back();
        heap.pop_back();
        if (worst.error <= kRoundoff * std::abs(worst.value)) {
            // Error estimate is at rounding level; bisecting cannot improve it.
            retired.push_back(worst);
            retired_err += worst.error;
            continue;
        }
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // Panel cannot be split further in double precision.
            throw QuadratureError("quadrature panel collapsed below machine resolution", total,
                                  total_err);
        }
        const Panel left = gk15_panel(f, worst.lo, mid);
        const Panel right = gk15_panel(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), panel_less);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), panel_less);
    }
    // Re-sum to shed accumulated rounding from the incremental updates.
    double value = 0.0;
    double err = 0.0;
    for (const auto* set : {&heap, &retired}) {
        for (const auto& p : *set) {
            value += p.value;
            err += p.error;
        }
    }
    return {value, err, heap.size() + retired.size()};
}

} // namespace detail

// Integrates f over [a, b] with optional interior breakpoints (kinks or
// discontinuities of f). `b` may be +infinity.
template <class F>
QuadratureResult integrate_detailed(F&& f, double a, double b, std::vector<double> breakpoints = {},
                                    const QuadratureOptions& opt = {}) {
    if (std::isnan(a) || std::isnan(b) || !std::isfinite(a)) {
        throw std::invalid_argument("integrate: lower limit must be finite");
    }
    if (b <= a) return {};

    if (std::isfinite(b)) {
        std::vector<double> cuts{a};
        std::sort(breakpoints.begin(), breakpoints.end());
        for (double x : breakpoints) {
            if (x > a && x < b) cuts.push_back(x);
        }
        cuts.push_back(b);
        return detail::adaptive(f, cuts, opt);
    }

    auto mapped = [&f, a](double u) -> double {
        const double one_minus = 1.0 - u;
        const double x = a + u / one_minus;
        if (!std::isfinite(x)) return 0.0;
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx / (one_minus * one_minus);
    };
    std::vector<double> cuts{0.0};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double x : breakpoints) {
        if (x > a && std::isfinite(x)) cuts.push_back((x - a) / (1.0 + (x - a)));
    }
    cuts.push_back(1.0);
    return detail::adaptive(mapped, cuts, opt);
}

template <class F>
double integrate(F&& f, double a, double b, std::vector<double> breakpoints = {},
                 const QuadratureOptions& opt = {}) {
    return integrate_detailed(std::forward<F>(f), a, b, std::move(breakpoints), opt).value;
}

} // namespace trickle::numeric
