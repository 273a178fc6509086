#include "trickle/cli/markov_suite.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "trickle/markov/integral_identities.hpp"
#include "trickle/markov/lifetime.hpp"
#include "trickle/markov/residual_chain.hpp"
#include "trickle/numeric/quadrature.hpp"
#include "trickle/numeric/rng.hpp"
#include "trickle/numeric/stats.hpp"

namespace trickle::cli {

namespace {

using markov::ChainSpec;

CheckResult make(std::string name, double observed, double expected, double error, double tol,
                 std::string note = {}) {
    return {std::move(name), observed, expected, error, tol, error <= tol, std::move(note)};
}

CheckResult fixed_point(int m) {
    const ChainSpec spec(std::make_shared<markov::Exponential>(1.0), m);
    const double grid[] = {0.05, 0.4, 1.1, 2.5};
    double worst = 0.0;
    double at_obs = 0.0;
    double at_exp = 0.0;
    std::vector<double> state(static_cast<std::size_t>(m));
    const std::size_t combos = static_cast<std::size_t>(std::pow(4, m));
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rest = c;
        for (auto& x : state) {
            x = grid[rest % 4];
            rest /= 4;
        }
        const auto r = markov::fixed_point_check(spec, state);
        const double err = std::abs(r.propagated - r.invariant);
        if (err >= worst) {
            worst = err;
            at_obs = r.propagated;
            at_exp = r.invariant;
        }
    }
    return make("exp_fixed_point_m" + std::to_string(m), at_obs, at_exp, worst, 1e-8,
                "max over a 4^m state grid");
}

CheckResult uniform_equilibrium() {
    const ChainSpec spec(std::make_shared<markov::Uniform>(0.0, 1.0), 1);
    double worst = 0.0;
    double obs = 0.0;
    double ref = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double y = i / 40.0;
        const double got = markov::stationary_cdf(spec, y);
        const double want = 1.0 - (1.0 - y) * (1.0 - y);
        if (std::abs(got - want) >= worst) {
            worst = std::abs(got - want);
            obs = got;
            ref = want;
        }
    }
    return make("uniform_equilibrium_m1", obs, ref, worst, 1e-8, "1 - (1 - y)^2 on [0, 1]");
}

CheckResult sampler_ks(const std::string& label, std::shared_ptr<const markov::LifetimeDistribution> d, int m,
                       std::uint64_t seed, std::size_t steps) {
    const ChainSpec spec(std::move(d), m);
    const auto sample = markov::sample_chain(spec, steps + 1000, 1000, seed);
    const double ks = numeric::ks_statistic(sample.values, [&](double y) { return markov::stationary_cdf(spec, y); });
    return make("sampler_ks_" + label, ks, 0.0, ks, 0.02,
                std::to_string(sample.values.size()) + " samples, " + std::to_string(sample.restarts) + " restarts");
}

CheckResult simplex(int m) {
    const auto r = markov::simplex_integral_check(m, [](double x) { return std::exp(-x); });
    return make("simplex_identity_m" + std::to_string(m), r.lhs, r.rhs, std::abs(r.lhs - r.rhs), 1e-6,
                "G(x) = exp(-x)");
}

CheckResult double_integral(int m, int j) {
    const auto r = markov::double_integral_check(m, j, [](double x) { return std::exp(-x); });
    return make("double_integral_identity_m" + std::to_string(m) + "_j" + std::to_string(j), r.lhs, r.rhs,
                std::abs(r.lhs - r.rhs), 1e-6, "G(x) = exp(-x)");
}

// Moment formula against integrating the stationary CDF directly.
CheckResult moment_vs_quadrature(const std::string& label, std::shared_ptr<const markov::LifetimeDistribution> d,
                                 int m, int j) {
    const ChainSpec spec(std::move(d), m);
    const double formula = markov::stationary_moment(spec, j);
    const double hi = spec.dist().tail_bound().value_or(spec.dist().support_hi());
    numeric::QuadratureOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-10;
    const double direct = numeric::integrate(
        [&](double y) { return j * std::pow(y, j - 1) * (1.0 - markov::stationary_cdf(spec, y)); }, 0.0, hi,
        spec.dist().breakpoints(), opt);
    return make("moment_" + label + "_m" + std::to_string(m) + "_j" + std::to_string(j), formula, direct,
                std::abs(formula - direct) / std::abs(direct), 1e-6, "relative error");
}

CheckResult laplace_vs_mc(const std::string& label, std::shared_ptr<const markov::LifetimeDistribution> d,
                          std::vector<double> s, std::uint64_t seed, std::size_t steps) {
    const ChainSpec spec(std::move(d), static_cast<int>(s.size()));
    const double exact = markov::laplace_transform(spec, s);
    const auto mc = markov::laplace_transform_monte_carlo(spec, s, steps + 1000, 1000, seed);
    // Overlapping windows are correlated; allow a generous multiple of the naive error.
    const double tol = 10.0 * mc.std_error + 1e-4;
    return make("laplace_vs_monte_carlo_" + label, mc.value, exact, std::abs(mc.value - exact), tol,
                "closed form vs chain average");
}

} // namespace

std::vector<CheckResult> run_markov_suite(std::uint64_t seed, std::size_t sampler_steps) {
    const auto exp1 = std::make_shared<markov::Exponential>(1.0);
    const auto unif = std::make_shared<markov::Uniform>(0.0, 1.0);
    const auto listen = std::make_shared<markov::ListenOnlyRayleigh>(50.0, 0.5);
    const auto rayleigh = std::make_shared<markov::ListenOnlyRayleigh>(50.0, 0.0);

    std::vector<CheckResult> out;
    for (int m = 1; m <= 3; ++m) out.push_back(fixed_point(m));
    out.push_back(uniform_equilibrium());
    out.push_back(sampler_ks("exponential_m2", exp1, 2, numeric::derive_seed(seed, 1), sampler_steps));
    out.push_back(sampler_ks("uniform_m1", unif, 1, numeric::derive_seed(seed, 2), sampler_steps));
    out.push_back(sampler_ks("listen_only_m2", listen, 2, numeric::derive_seed(seed, 3), sampler_steps));
    for (int m = 1; m <= 3; ++m) out.push_back(simplex(m));
    out.push_back(double_integral(1, 1));
    out.push_back(double_integral(2, 1));
    out.push_back(double_integral(1, 3));
    for (int j = 1; j <= 2; ++j) {
        out.push_back(moment_vs_quadrature("uniform", unif, 2, j));
        out.push_back(moment_vs_quadrature("listen_only", listen, 2, j));
        out.push_back(moment_vs_quadrature("rayleigh", rayleigh, 4, j));
    }
    out.push_back(laplace_vs_mc("exponential_s1_2", exp1, {1.0, 2.0}, numeric::derive_seed(seed, 4), sampler_steps));
    out.push_back(laplace_vs_mc("listen_only_s2_5", listen, {2.0, 5.0}, numeric::derive_seed(seed, 5), sampler_steps));
    return out;
}

} // namespace trickle::cli
