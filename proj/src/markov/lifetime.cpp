#include "trickle/markov/lifetime.hpp"

#include <cmath>
#include <sstream>

#include "trickle/numeric/format.hpp"
#include "trickle/numeric/quadrature.hpp"
#include "trickle/numeric/special.hpp"

namespace trickle::markov {

namespace {

constexpr int kBisectionSteps = 80;

template <class Pred>
double bisect(double lo, double hi, Pred at_or_above) {
    for (int i = 0; i < kBisectionSteps; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (at_or_above(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double LifetimeDistribution::pdf(double t) const {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    const double lo = std::max(support_lo(), t - h);
    const double hi = t + h;
    return (cdf(hi) - cdf(lo)) / (hi - lo);
}

double LifetimeDistribution::moment(int j) const {
    if (j < 0) throw DomainError("negative moment order");
    if (j == 0) return 1.0;
    const double lo = support_lo();
    const double hi = tail_bound().value_or(support_hi());
    auto integrand = [&](double y) { return static_cast<double>(j) * std::pow(y, j - 1) * survival(y); };
    try {
        const double tail = numeric::integrate(integrand, lo, hi, breakpoints());
        const double value = std::pow(lo, j) + tail;
        if (!std::isfinite(value)) throw DomainError("moment is not finite");
        return value;
    } catch (const numeric::QuadratureError& e) {
        std::ostringstream os;
        os << "moment " << j << " of " << name() << " did not converge (" << e.what() << ")";
        throw DomainError(os.str());
    }
}

double LifetimeDistribution::bracket_hi(double start) const {
    const double top = support_hi();
    if (std::isfinite(top)) return top;
    return std::max(start, 1.0);
}

double LifetimeDistribution::inverse_cdf(double u) const {
    double lo = support_lo();
    double hi = bracket_hi(lo + 1.0);
    for (int i = 0; i < 2000 && cdf(hi) < u; ++i) {
        lo = hi;
        hi *= 2.0;
    }
    return bisect(lo, hi, [&](double t) { return cdf(t) >= u; });
}

double LifetimeDistribution::inverse_survival(double q) const {
    double lo = support_lo();
    double hi = bracket_hi(lo + 1.0);
    for (int i = 0; i < 2000 && survival(hi) > q; ++i) {
        lo = hi;
        hi *= 2.0;
    }
    return bisect(lo, hi, [&](double t) { return survival(t) <= q; });
}

double LifetimeDistribution::cumulative_hazard(double t) const { return -std::log(survival(t)); }

// --- Exponential -----------------------------------------------------------

Exponential::Exponential(double rate) : rate_(rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("Exponential: rate must be > 0");
}

double Exponential::cdf(double t) const { return t <= 0.0 ? 0.0 : -std::expm1(-rate_ * t); }

double Exponential::survival(double t) const { return t <= 0.0 ? 1.0 : std::exp(-rate_ * t); }

double Exponential::pdf(double t) const { return t < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * t); }

double Exponential::moment(int j) const {
    if (j < 0) throw DomainError("negative moment order");
    return numeric::factorial(j) / std::pow(rate_, j);
}

double Exponential::inverse_cdf(double u) const { return -std::log1p(-u) / rate_; }

double Exponential::inverse_survival(double q) const { return -std::log(q) / rate_; }

std::string Exponential::name() const { return "Exp(" + numeric::format_real(rate_) + ")"; }

// --- Uniform ---------------------------------------------------------------

Uniform::Uniform(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo >= 0.0 && hi > lo && std::isfinite(hi))) {
        throw std::invalid_argument("Uniform: need 0 <= lo < hi < inf");
    }
}

double Uniform::cdf(double t) const {
    if (t <= lo_) return 0.0;
    if (t >= hi_) return 1.0;
    return (t - lo_) / (hi_ - lo_);
}

double Uniform::pdf(double t) const { return (t < lo_ || t > hi_) ? 0.0 : 1.0 / (hi_ - lo_); }

double Uniform::moment(int j) const {
    if (j < 0) throw DomainError("negative moment order");
    return (std::pow(hi_, j + 1) - std::pow(lo_, j + 1)) / ((j + 1) * (hi_ - lo_));
}

double Uniform::inverse_cdf(double u) const { return lo_ + u * (hi_ - lo_); }

double Uniform::inverse_survival(double q) const { return hi_ - q * (hi_ - lo_); }

std::string Uniform::name() const {
    return "U(" + numeric::format_real(lo_) + "," + numeric::format_real(hi_) + ")";
}

// --- ListenOnlyRayleigh ----------------------------------------------------

ListenOnlyRayleigh::ListenOnlyRayleigh(double n, double eta)
    : n_(n), eta_(eta), half_rate_(n / (2.0 * (1.0 - eta))) {
    if (!(n > 0.0)) throw std::invalid_argument("ListenOnlyRayleigh: n must be > 0");
    if (!(eta >= 0.0 && eta < 1.0)) {
        throw std::invalid_argument("ListenOnlyRayleigh: eta must lie in [0, 1)");
    }
}

double ListenOnlyRayleigh::cdf(double t) const {
    if (t <= eta_) return 0.0;
    const double d = t - eta_;
    return -std::expm1(-half_rate_ * d * d);
}

double ListenOnlyRayleigh::survival(double t) const {
    if (t <= eta_) return 1.0;
    const double d = t - eta_;
    return std::exp(-half_rate_ * d * d);
}

double ListenOnlyRayleigh::pdf(double t) const {
    if (t < eta_) return 0.0;
    const double d = t - eta_;
    return 2.0 * half_rate_ * d * std::exp(-half_rate_ * d * d);
}

double ListenOnlyRayleigh::inverse_cdf(double u) const {
    return eta_ + std::sqrt(-std::log1p(-u) / half_rate_);
}

double ListenOnlyRayleigh::inverse_survival(double q) const {
    return eta_ + std::sqrt(-std::log(q) / half_rate_);
}

std::optional<double> ListenOnlyRayleigh::tail_bound() const {
    // 40 kernel standard deviations: exp(-800) underflows.
    return eta_ + 40.0 * std::sqrt((1.0 - eta_) / n_);
}

std::string ListenOnlyRayleigh::name() const {
    return "ListenOnlyRayleigh(n=" + numeric::format_real(n_) + ",eta=" + numeric::format_real(eta_) + ")";
}

// --- FunctionLifetime ------------------------------------------------------

FunctionLifetime::FunctionLifetime(Parts parts) : parts_(std::move(parts)) {
    if (!parts_.cdf) throw std::invalid_argument("FunctionLifetime: cdf is required");
    if (!(parts_.support_lo >= 0.0 && parts_.support_hi > parts_.support_lo)) {
        throw std::invalid_argument("FunctionLifetime: bad support");
    }
}

double FunctionLifetime::pdf(double t) const {
    return parts_.pdf ? parts_.pdf(t) : LifetimeDistribution::pdf(t);
}

double FunctionLifetime::inverse_cdf(double u) const {
    return parts_.inverse_cdf ? parts_.inverse_cdf(u) : LifetimeDistribution::inverse_cdf(u);
}

} // namespace trickle::markov
