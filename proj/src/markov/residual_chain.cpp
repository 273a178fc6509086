#include "trickle/markov/residual_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "trickle/numeric/quadrature.hpp"
#include "trickle/numeric/rng.hpp"
#include "trickle/numeric/special.hpp"

namespace trickle::markov {

namespace {

double effective_hi(const LifetimeDistribution& d) {
    const double hi = d.support_hi();
    if (const auto tb = d.tail_bound()) return std::min(hi, *tb);
    return hi;
}

std::vector<double> shifted_breakpoints(const LifetimeDistribution& d, double shift) {
    std::vector<double> out;
    for (double b : d.breakpoints()) {
        if (b - shift > 0.0) out.push_back(b - shift);
    }
    return out;
}

template <class F>
double guarded_integral(F&& f, double lo, double hi, std::vector<double> breakpoints, const char* what) {
    try {
        return numeric::integrate(std::forward<F>(f), lo, hi, std::move(breakpoints));
    } catch (const numeric::QuadratureError& e) {
        throw DomainError(std::string(what) + ": " + e.what());
    }
}

// int_0^{hi - y} g(s + y) s^(m-1) ds
template <class G>
double residual_integral(const ChainSpec& spec, double y, G&& g, const char* what) {
    const auto& d = spec.dist();
    const double hi = effective_hi(d);
    const int m = spec.m();
    auto integrand = [&](double s) {
        const double v = g(s + y);
        return m == 1 ? v : v * std::pow(s, m - 1);
    };
    return guarded_integral(integrand, 0.0, hi - y, shifted_breakpoints(d, y), what);
}

double window_sum(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

void require_window(const ChainSpec& spec, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(spec.m())) {
        throw std::invalid_argument("expected a window of exactly m values");
    }
}

} // namespace

ChainSpec::ChainSpec(std::shared_ptr<const LifetimeDistribution> dist, int m)
    : dist_(std::move(dist)), m_(m) {
    if (!dist_) throw std::invalid_argument("ChainSpec: null distribution");
    if (m_ < 1) throw std::invalid_argument("ChainSpec: memory depth m must be >= 1");
    mth_moment_ = dist_->moment(m_);
    if (!(mth_moment_ > 0.0) || !std::isfinite(mth_moment_)) {
        throw DomainError("ChainSpec: E[Y^m] is not a positive finite number");
    }
    normalization_ = numeric::factorial(m_) / mth_moment_;
}

double stationary_cdf(const ChainSpec& spec, double y) {
    if (y <= 0.0) return 0.0;
    const auto& d = spec.dist();
    if (y >= effective_hi(d)) return 1.0;
    const double tail =
        residual_integral(spec, y, [&](double t) { return d.survival(t); }, "stationary_cdf");
    return std::clamp(1.0 - spec.m() / spec.mth_moment() * tail, 0.0, 1.0);
}

double stationary_pdf(const ChainSpec& spec, double y) {
    if (y < 0.0) return 0.0;
    const auto& d = spec.dist();
    if (y >= effective_hi(d)) return 0.0;
    const double v = residual_integral(spec, y, [&](double t) { return d.pdf(t); }, "stationary_pdf");
    return spec.m() / spec.mth_moment() * v;
}

double invariant_density(const ChainSpec& spec, std::span<const double> x) {
    require_window(spec, x);
    for (double v : x) {
        if (v < 0.0) return 0.0;
    }
    return spec.normalization() * spec.dist().survival(window_sum(x));
}

double sum_density(const ChainSpec& spec, double s) {
    if (s < 0.0) return 0.0;
    const int m = spec.m();
    const double power = m == 1 ? 1.0 : std::pow(s, m - 1);
    return m / spec.mth_moment() * power * spec.dist().survival(s);
}

double stationary_moment(const ChainSpec& spec, int j) {
    if (j < 0) throw std::invalid_argument("stationary_moment: j must be >= 0");
    if (j == 0) return 1.0;
    const int m = spec.m();
    return spec.dist().moment(m + j) / (numeric::binomial(m + j, j) * spec.mth_moment());
}

double transition_density(const ChainSpec& spec, std::span<const double> history, double y) {
    require_window(spec, history);
    if (y < 0.0) return 0.0;
    const double sigma = window_sum(history);
    const double surv = spec.dist().survival(sigma);
    if (!(surv > 0.0)) return 0.0;
    return spec.dist().pdf(sigma + y) / surv;
}

FixedPointCheck fixed_point_check(const ChainSpec& spec, std::span<const double> next_state) {
    require_window(spec, next_state);
    const int m = spec.m();
    const auto& d = spec.dist();
    const double y = next_state.back();
    const std::vector<double> rest(next_state.begin(), next_state.end() - 1);
    const double rest_sum = window_sum(rest);

    std::vector<double> window(static_cast<std::size_t>(m));
    auto integrand = [&](double x1) {
        window[0] = x1;
        std::copy(rest.begin(), rest.end(), window.begin() + 1);
        return invariant_density(spec, window) * transition_density(spec, window, y);
    };
    auto bps = shifted_breakpoints(d, rest_sum);
    for (double b : shifted_breakpoints(d, rest_sum + y)) bps.push_back(b);
    const double hi = effective_hi(d) - rest_sum;
    FixedPointCheck out;
    out.propagated = hi > 0.0 ? guarded_integral(integrand, 0.0, hi, bps, "fixed_point_check") : 0.0;
    out.invariant = invariant_density(spec, next_state);
    return out;
}

double laplace_transform(const ChainSpec& spec, std::span<const double> s) {
    require_window(spec, s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0)) throw std::invalid_argument("laplace_transform: arguments must be > 0");
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(s[i] - s[j]) <= 1e-12 * std::max(s[i], s[j])) {
                throw std::invalid_argument("laplace_transform: arguments must be pairwise distinct");
            }
        }
    }
    const auto& d = spec.dist();
    const double hi = effective_hi(d);
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double si = s[i];
        // (1 - L_Y(s)) / s
        const double weight = guarded_integral([&](double t) { return std::exp(-si * t) * d.survival(t); },
                                               0.0, hi, d.breakpoints(), "laplace_transform");
        double denom = 1.0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (j != i) denom *= s[j] - si;
        }
        total += weight / denom;
    }
    return spec.normalization() * total;
}

ChainSample sample_chain(const ChainSpec& spec, std::size_t steps, std::size_t burn_in, std::uint64_t seed) {
    if (steps <= burn_in) throw std::invalid_argument("sample_chain: steps must exceed burn_in");
    const auto& d = spec.dist();
    const auto m = static_cast<std::size_t>(spec.m());
    numeric::RandomStream rng(seed);
    std::vector<double> window(m);
    ChainSample out;
    out.values.reserve(steps - burn_in);

    constexpr std::size_t kMaxRestarts = 1'000'000;
    auto redraw = [&] {
        for (auto& x : window) x = d.inverse_cdf(rng.uniform_open());
    };
    auto restart = [&] {
        if (++out.restarts > kMaxRestarts) throw DomainError("sample_chain: chain keeps hitting the absorbing boundary");
        redraw();
    };
    redraw();

    std::size_t pos = 0;
    std::size_t step = 0;
    while (step < steps) {
        const double sigma = window_sum(window);
        const double tail = d.survival(sigma);
        if (!(tail > 0.0)) {
            restart();
            continue;
        }
        const double q = tail * (1.0 - rng.uniform());
        const double x = std::max(0.0, d.inverse_survival(q) - sigma);
        window[pos] = x;
        pos = (pos + 1) % m;
        if (step >= burn_in) out.values.push_back(x);
        ++step;
    }
    return out;
}

MonteCarloEstimate laplace_transform_monte_carlo(const ChainSpec& spec, std::span<const double> s,
                                                 std::size_t steps, std::size_t burn_in,
                                                 std::uint64_t seed) {
    require_window(spec, s);
    const auto path = sample_chain(spec, steps, burn_in, seed).values;
    const std::size_t m = s.size();
    if (path.size() < m) throw std::invalid_argument("laplace_transform_monte_carlo: path too short");
    double sum = 0.0;
    double sum_sq = 0.0;
    const std::size_t windows = path.size() - m + 1;
    for (std::size_t t = 0; t < windows; ++t) {
        double exponent = 0.0;
        for (std::size_t i = 0; i < m; ++i) exponent += s[i] * path[t + i];
        const double v = std::exp(-exponent);
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(windows);
    MonteCarloEstimate est;
    est.value = sum / n;
    est.std_error = std::sqrt(std::max(0.0, sum_sq / n - est.value * est.value) / n);
    return est;
}

} // namespace trickle::markov
