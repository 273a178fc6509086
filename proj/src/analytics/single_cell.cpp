#include "trickle/analytics/single_cell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <tuple>

#include "trickle/core/config.hpp"
#include "trickle/numeric/quadrature.hpp"
#include "trickle/numeric/special.hpp"

namespace trickle::analytics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNormConstTol = 1e-10;

bool degenerate(const AnalyticParams& p) { return p.eta >= 1.0; }

// Kernel exp(-a w^2) with a = n / (2 (1 - eta)).
double kernel_rate(const AnalyticParams& p) { return p.n / (2.0 * (1.0 - p.eta)); }
double kernel_sigma(const AnalyticParams& p) { return std::sqrt((1.0 - p.eta) / p.n); }

// Width past which exp(-a w^2) w^(k-1) is negligible: 12 kernel standard
// deviations plus room for the polynomial factor to peak.
double tail_width(const AnalyticParams& p, int k) {
    return kernel_sigma(p) * (12.0 + 2.0 * std::sqrt(static_cast<double>(k)));
}

std::string describe(const AnalyticParams& p) {
    std::ostringstream os;
    os << "(k=" << p.k << ", n=" << p.n << ", eta=" << p.eta << ")";
    return os.str();
}

template <class F>
double quad(F&& f, double lo, double hi, const AnalyticParams& p, const char* what, double rel = 1e-12) {
    numeric::QuadratureOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = rel;
    try {
        return numeric::integrate(std::forward<F>(f), lo, hi, {}, opt);
    } catch (const numeric::QuadratureError& e) {
        throw NumericalError(std::string(what) + " " + describe(p) + ": " + e.what());
    }
}

AnalyticParams with_k(const AnalyticParams& p, int k) {
    AnalyticParams q = p;
    q.k = k;
    return q;
}

struct CacheKey {
    int k;
    double n;
    double eta;
    bool operator<(const CacheKey& o) const { return std::tie(k, n, eta) < std::tie(o.k, o.n, o.eta); }
};

std::shared_mutex cache_mutex;
std::map<CacheKey, double> cache;

} // namespace

void AnalyticParams::validate() const {
    if (k < 1) throw ConfigError("k must be >= 1");
    if (!(n >= 1.0) || !std::isfinite(n)) throw ConfigError("n must be >= 1");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
}

double hazard_unconditional(double t, const AnalyticParams& p) {
    if (t < p.eta) return 0.0;
    if (degenerate(p)) return std::numeric_limits<double>::infinity();
    return p.n * (t - p.eta) / (1.0 - p.eta);
}

double hazard_conditional(double t, double v, const AnalyticParams& p) {
    if (t + v < p.eta) return 0.0;
    if (degenerate(p)) return std::numeric_limits<double>::infinity();
    return p.n * (t + v - p.eta) / (1.0 - p.eta);
}

double cdf_T1(double t, const AnalyticParams& p) {
    if (t < p.eta) return 0.0;
    if (degenerate(p)) return 1.0;
    const double w = t - p.eta;
    return -std::expm1(-kernel_rate(p) * w * w);
}

double pdf_T1(double t, const AnalyticParams& p) {
    if (t < p.eta || degenerate(p)) return 0.0;
    const double w = t - p.eta;
    return 2.0 * kernel_rate(p) * w * std::exp(-kernel_rate(p) * w * w);
}

double mean_T1(const AnalyticParams& p) { return p.eta + std::sqrt(kPi * (1.0 - p.eta) / (2.0 * p.n)); }

double mean_N1(const AnalyticParams& p) { return 1.0 / mean_T1(p); }

double conditional_cdf_T2(double t, double v, const AnalyticParams& p) {
    if (t + v < p.eta) return 0.0;
    if (degenerate(p)) return t > 0.0 || v < p.eta ? 1.0 : 0.0;
    if (v < p.eta) {
        const double w = t + v - p.eta;
        return -std::expm1(-kernel_rate(p) * w * w);
    }
    return -std::expm1(-p.n * (0.5 * t * t + t * (v - p.eta)) / (1.0 - p.eta));
}

NormConstForms norm_const_forms(const AnalyticParams& p) {
    p.validate();
    const int k = p.k;
    if (k == 1) return {1.0, 1.0};
    const double flat = std::pow(p.eta, k - 1) / numeric::factorial(k - 1);
    if (degenerate(p)) return {1.0 / flat, 1.0 / flat};

    const double a = kernel_rate(p);
    const double fk2 = numeric::factorial(k - 2);
    const double tail = quad(
        [&](double w) { return std::pow(p.eta + w, k - 2) * std::exp(-a * w * w); }, 0.0,
        tail_width(p, k), p, "norm_const", 1e-13);

    double sum = 0.0;
    const double scale = 2.0 * (1.0 - p.eta) / p.n;
    for (int i = 0; i <= k - 2; ++i) {
        sum += numeric::binomial(k - 2, i) * std::pow(p.eta, k - i - 2) * std::pow(scale, 0.5 * (i + 1)) *
               numeric::gamma(0.5 * (i + 1));
    }
    return {1.0 / (flat + tail / fk2), 1.0 / (flat + sum / (2.0 * fk2))};
}

double norm_const(const AnalyticParams& p) {
    const CacheKey key{p.k, p.n, p.eta};
    {
        std::shared_lock lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const auto forms = norm_const_forms(p);
    if (!(std::abs(forms.quadrature - forms.finite_sum) <= kNormConstTol * std::abs(forms.finite_sum))) {
        std::ostringstream os;
        os.precision(17);
        os << "norm_const " << describe(p) << ": quadrature " << forms.quadrature << " vs finite sum "
           << forms.finite_sum;
        throw NumericalError(os.str());
    }
    std::unique_lock lock(cache_mutex);
    cache.emplace(key, forms.finite_sum);
    return forms.finite_sum;
}

double joint_density(std::span<const double> t, const AnalyticParams& p) {
    if (p.k < 2 || t.size() != static_cast<std::size_t>(p.k - 1)) {
        throw std::invalid_argument("joint_density: expects k >= 2 and k - 1 arguments");
    }
    double s = 0.0;
    for (double x : t) {
        if (x < 0.0) return 0.0;
        s += x;
    }
    const double c = norm_const(p);
    if (s < p.eta) return c;
    if (degenerate(p)) return 0.0;
    const double w = s - p.eta;
    return c * std::exp(-kernel_rate(p) * w * w);
}

double sigma_density(double s, const AnalyticParams& p) {
    if (p.k < 2) throw std::invalid_argument("sigma_density: expects k >= 2");
    if (s < 0.0) return 0.0;
    const double base = norm_const(p) / numeric::factorial(p.k - 2) * std::pow(s, p.k - 2);
    if (s < p.eta) return base;
    if (degenerate(p)) return 0.0;
    const double w = s - p.eta;
    return base * std::exp(-kernel_rate(p) * w * w);
}

double pdf_T(double t, const AnalyticParams& p) {
    if (p.k == 1) return pdf_T1(t, p);
    if (t < 0.0) return 0.0;
    const int k = p.k;
    if (degenerate(p)) return t <= 1.0 ? (k - 1) * std::pow(1.0 - t, k - 2) : 0.0;

    const double a = kernel_rate(p);
    const double lo = std::max(0.0, p.eta - t);
    const double pref = norm_const(p) / numeric::factorial(k - 2) * 2.0 * a;
    const double v = quad(
        [&](double x) {
            const double w = t + x - p.eta;
            return w * std::pow(x, k - 2) * std::exp(-a * w * w);
        },
        lo, lo + tail_width(p, k), p, "pdf_T", 1e-10);
    return pref * v;
}

double cdf_T(double t, const AnalyticParams& p) {
    if (p.k == 1) return cdf_T1(t, p);
    if (t <= 0.0) return 0.0;
    const int k = p.k;
    if (degenerate(p)) return t >= 1.0 ? 1.0 : -std::expm1((k - 1) * std::log1p(-t));

    // 1 - C / (k-2)! * int_0^inf (1 - F1(s + t)) s^(k-2) ds
    const double a = kernel_rate(p);
    double integral = 0.0;
    if (t < p.eta) {
        const double d = p.eta - t;
        integral = std::pow(d, k - 1) / (k - 1) +
                   quad([&](double w) { return std::pow(w + d, k - 2) * std::exp(-a * w * w); }, 0.0,
                        tail_width(p, k), p, "cdf_T");
    } else {
        const double d = t - p.eta;
        integral = quad(
            [&](double s) {
                const double w = s + d;
                return std::pow(s, k - 2) * std::exp(-a * w * w);
            },
            0.0, tail_width(p, k), p, "cdf_T");
    }
    const double v = 1.0 - norm_const(p) / numeric::factorial(k - 2) * integral;
    return std::clamp(v, 0.0, 1.0);
}

double moment_T(int j, const AnalyticParams& p) {
    if (j < 0) throw std::invalid_argument("moment_T: j must be >= 0");
    if (j == 0) return 1.0;
    return numeric::factorial(j) * norm_const(p) / norm_const(with_k(p, p.k + j));
}

double moment_T_eta0(int j, const AnalyticParams& p) {
    if (j < 0) throw std::invalid_argument("moment_T_eta0: j must be >= 0");
    return numeric::factorial(j) / std::pow(2.0 * p.n, 0.5 * j) * numeric::gamma_ratio(0.5 * p.k, 0.5 * (p.k + j));
}

double moment_T_limit(int j, int k, double eta) {
    if (j < 0 || k < 1) throw std::invalid_argument("moment_T_limit: need j >= 0 and k >= 1");
    return std::exp(numeric::log_gamma(k) + numeric::log_gamma(j + 1.0) - numeric::log_gamma(k + j)) *
           std::pow(eta, j);
}

double mean_N(const AnalyticParams& p) { return norm_const(with_k(p, p.k + 1)) / norm_const(p); }

double mean_N_asymptotic(const AnalyticParams& p) {
    p.validate();
    if (p.eta == 0.0) return std::sqrt(2.0 * p.n) * numeric::gamma_ratio(0.5 * (p.k + 1), 0.5 * p.k);
    const double k = p.k;
    return k / p.eta - k / (p.eta * p.eta) * std::sqrt(kPi * (1.0 - p.eta) / (2.0 * p.n));
}

} // namespace trickle::analytics
