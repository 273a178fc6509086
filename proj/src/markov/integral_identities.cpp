#include "trickle/markov/integral_identities.hpp"

#include <cmath>
#include <stdexcept>

#include "trickle/markov/lifetime.hpp"
#include "trickle/numeric/quadrature.hpp"
#include "trickle/numeric/rng.hpp"
#include "trickle/numeric/special.hpp"

namespace trickle::markov {

namespace {

constexpr int kMaxNestedDepth = 3;

template <class F>
double half_line(F&& f, const numeric::QuadratureOptions& opt, double scale = 1.0) {
    // A cut at the integrand's length scale keeps the mapped panels from
    // stepping over mass that sits far out on the half line.
    try {
        return numeric::integrate(std::forward<F>(f), 0.0, numeric::kInf, {scale}, opt);
    } catch (const numeric::QuadratureError& e) {
        throw DomainError(std::string("integral identity: ") + e.what());
    }
}

// H_0(z) = G(z), H_d(z) = int_0^inf H_{d-1}(z + x) dx.
double nested(int depth, double z, const std::function<double(double)>& g) {
    if (depth == 0) return g(z);
    numeric::QuadratureOptions opt;
    opt.abs_tol = 0.0;  // inner values can be tiny; only relative accuracy means anything
    opt.rel_tol = 1e-10;
    return half_line([&](double x) { return nested(depth - 1, z + x, g); }, opt, 1.0 + z);
}

double power_moment(int p, const std::function<double(double)>& g) {
    numeric::QuadratureOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 1e-12;
    return half_line([&](double x) { return std::pow(x, p) * g(x); }, opt);
}

} // namespace

IdentityCheck simplex_integral_check(int m, const std::function<double(double)>& g, std::uint64_t seed,
                                     std::size_t mc_samples) {
    if (m < 0) throw std::invalid_argument("simplex_integral_check: m must be >= 0");
    IdentityCheck out;
    out.rhs = power_moment(m, g) / numeric::factorial(m);
    if (m <= kMaxNestedDepth) {
        out.lhs = nested(m + 1, 0.0, g);
        return out;
    }
    // x_i ~ Exp(1) i.i.d.; the sum S ~ Gamma(m + 1) and the weight is G(S) e^S.
    numeric::RandomStream rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < mc_samples; ++i) {
        double s = 0.0;
        for (int d = 0; d <= m; ++d) s -= std::log(rng.uniform_open());
        const double w = g(s) * std::exp(s);
        sum += w;
        sum_sq += w * w;
    }
    const double n = static_cast<double>(mc_samples);
    out.lhs = sum / n;
    out.lhs_std_error = std::sqrt(std::max(0.0, sum_sq / n - out.lhs * out.lhs) / n);
    return out;
}

IdentityCheck double_integral_check(int m, int j, const std::function<double(double)>& g) {
    if (m < 0 || j < 0) throw std::invalid_argument("double_integral_check: m, j must be >= 0");
    IdentityCheck out;
    numeric::QuadratureOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 1e-10;
    out.lhs = half_line(
        [&](double y) {
            const double inner =
                half_line([&](double x) { return std::pow(x, j) * g(x + y); }, opt, 1.0 + y);
            return std::pow(y, m) * inner;
        },
        opt);
    out.rhs = power_moment(m + j + 1, g) / ((m + 1) * numeric::binomial(m + j + 1, j));
    return out;
}

} // namespace trickle::markov
