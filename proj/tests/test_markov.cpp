#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "trickle/markov/integral_identities.hpp"
#include "trickle/markov/lifetime.hpp"
#include "trickle/markov/residual_chain.hpp"
#include "trickle/numeric/quadrature.hpp"
#include "trickle/numeric/stats.hpp"

using namespace trickle::markov;
namespace num = trickle::numeric;

namespace {

ChainSpec chain(std::shared_ptr<const LifetimeDistribution> d, int m) { return ChainSpec(std::move(d), m); }
ChainSpec exp_chain(int m, double rate = 1.0) { return chain(std::make_shared<Exponential>(rate), m); }
ChainSpec unif_chain(int m, double lo = 0.0, double hi = 1.0) { return chain(std::make_shared<Uniform>(lo, hi), m); }

// Pareto with tail (1 + t)^-2: E[Y] = 1, E[Y^2] infinite.
std::shared_ptr<const LifetimeDistribution> pareto2() {
    FunctionLifetime::Parts p;
    p.cdf = [](double t) { return t <= 0.0 ? 0.0 : 1.0 - 1.0 / ((1.0 + t) * (1.0 + t)); };
    p.name = "pareto2";
    return std::make_shared<FunctionLifetime>(p);
}

double ks_vs(const std::vector<double>& x, auto cdf) { return num::ks_statistic(x, cdf); }

} // namespace

TEST_CASE("lifetime basics") {
    const Exponential e(2.0);
    CHECK(e.cdf(0.5) == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK(e.moment(3) == doctest::Approx(6.0 / 8.0));
    CHECK(e.inverse_survival(1e-300) == doctest::Approx(300.0 * std::log(10.0) / 2.0).epsilon(1e-12));
    const Uniform u(0.0, 2.0);
    CHECK(u.moment(2) == doctest::Approx(4.0 / 3.0));
    CHECK(u.inverse_cdf(0.25) == doctest::Approx(0.5));
    const ListenOnlyRayleigh r(50.0, 0.2);
    CHECK(r.cdf(0.2) == 0.0);
    CHECK(r.cdf(0.3) == doctest::Approx(1.0 - std::exp(-25.0 * 0.01 / 0.8)));
    // Rayleigh mean: eta + sqrt(pi (1 - eta) / (2 n))
    CHECK(r.moment(1) == doctest::Approx(0.2 + std::sqrt(3.14159265358979323846 * 0.8 / 100.0)).epsilon(1e-9));
    // generic fallbacks on a function-defined lifetime
    FunctionLifetime::Parts p;
    p.cdf = [](double t) { return t <= 0.0 ? 0.0 : 1.0 - std::exp(-t); };
    const FunctionLifetime f(p);
    CHECK(f.pdf(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(f.moment(2) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(f.inverse_cdf(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(pareto2()->moment(2), DomainError);
    CHECK(pareto2()->moment(1) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("ChainSpec rejects infinite moments") {
    CHECK_THROWS_AS(chain(pareto2(), 2), DomainError);
    CHECK_NOTHROW(chain(pareto2(), 1));
    CHECK_THROWS(exp_chain(0));
    CHECK(exp_chain(3).normalization() == doctest::Approx(1.0));
    CHECK(unif_chain(2).normalization() == doctest::Approx(6.0));
}

TEST_CASE("stationary_cdf examples") {
    for (int m = 1; m <= 3; ++m) {
        CHECK(stationary_cdf(exp_chain(m), 0.7) == doctest::Approx(1.0 - std::exp(-0.7)).epsilon(1e-9));
    }
    CHECK(stationary_cdf(unif_chain(1), 0.5) == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(stationary_cdf(unif_chain(1), 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(stationary_cdf(exp_chain(2), 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(stationary_cdf(unif_chain(2), 5.0) == doctest::Approx(1.0));
}

TEST_CASE("Exp fixed point on a grid") {
    for (double rate : {0.5, 1.0, 3.0}) {
        for (int m = 1; m <= 3; ++m) {
            const auto c = exp_chain(m, rate);
            for (double y = 0.0; y <= 4.0; y += 0.25) {
                CHECK(std::abs(stationary_cdf(c, y) - (1.0 - std::exp(-rate * y))) <= 1e-8);
            }
        }
    }
}

TEST_CASE("m = 1 gives the equilibrium overshoot law") {
    // U(0,2): density (1 - y/2) / 1, CDF y - y^2/4
    const auto c = unif_chain(1, 0.0, 2.0);
    for (double y = 0.0; y <= 2.0; y += 0.1) {
        CHECK(stationary_cdf(c, y) == doctest::Approx(y - y * y / 4.0).scale(1.0).epsilon(1e-9));
        CHECK(stationary_pdf(c, y + 1e-3) == doctest::Approx(1.0 - (y + 1e-3) / 2.0).scale(1.0).epsilon(1e-7));
    }
    // U(0,1) with depth m: 1 - (1 - y)^(m+1)
    for (int m = 1; m <= 3; ++m) {
        for (double y = 0.05; y < 1.0; y += 0.15) {
            CHECK(stationary_cdf(unif_chain(m), y) == doctest::Approx(1.0 - std::pow(1.0 - y, m + 1)).epsilon(1e-9));
        }
    }
}

TEST_CASE("stationary_cdf is monotone") {
    const auto c = chain(std::make_shared<ListenOnlyRayleigh>(30.0, 0.3), 2);
    double prev = -1.0;
    for (double y = 0.0; y <= 1.5; y += 0.02) {
        const double v = stationary_cdf(c, y);
        CHECK(v >= prev - 1e-12);
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
        prev = v;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("invariant_density examples") {
    const auto c = exp_chain(2);
    const double zero[] = {0.0, 0.0};
    const double half[] = {0.5, 0.5};
    CHECK(invariant_density(c, zero) == doctest::Approx(1.0));
    CHECK(invariant_density(c, half) == doctest::Approx(std::exp(-1.0)));
    const double past[] = {0.7, 0.6};
    CHECK(invariant_density(unif_chain(2), past) == 0.0);
    const double bad[] = {0.1};
    CHECK_THROWS(invariant_density(c, bad));
}

TEST_CASE("sum_density examples") {
    for (double t : {0.0, 0.5, 2.0}) CHECK(sum_density(exp_chain(1), t) == doctest::Approx(std::exp(-t)));
    CHECK(sum_density(exp_chain(3), 1.0) == doctest::Approx(0.5 * std::exp(-1.0)));
    CHECK(sum_density(exp_chain(2), 0.0) == 0.0);
    // integrates to one
    const auto c = unif_chain(3, 0.0, 2.0);
    CHECK(num::integrate([&](double s) { return sum_density(c, s); }, 0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("stationary_moment examples") {
    CHECK(stationary_moment(exp_chain(2), 1) == doctest::Approx(1.0));
    for (int m = 1; m <= 3; ++m) {
        double fact = 1.0;
        for (int j = 1; j <= 4; ++j) {
            fact *= j;
            CHECK(stationary_moment(exp_chain(m), j) == doctest::Approx(fact).epsilon(1e-10));
        }
    }
    CHECK(stationary_moment(unif_chain(1), 1) == doctest::Approx(1.0 / 3.0));
    // Pareto tail: m = 1 fine, j = 1 needs E[Y^2]
    CHECK_THROWS_AS(stationary_moment(chain(pareto2(), 1), 1), DomainError);
}

TEST_CASE("stationary_moment matches integrating the stationary CDF") {
    struct Case {
        ChainSpec spec;
        double hi;
    };
    const std::vector<Case> cases = {
        {exp_chain(2), num::kInf},
        {unif_chain(2), 1.0},
        {chain(std::make_shared<ListenOnlyRayleigh>(40.0, 0.25), 2), num::kInf},
    };
    num::QuadratureOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-10;
    for (const auto& c : cases) {
        for (int j = 1; j <= 2; ++j) {
            const double direct = num::integrate(
                [&](double y) { return j * std::pow(y, j - 1) * (1.0 - stationary_cdf(c.spec, y)); }, 0.0, c.hi, {},
                opt);
            const double closed = stationary_moment(c.spec, j);
            CHECK(std::abs(direct - closed) <= 1e-6 * closed);
        }
    }
}

TEST_CASE("transition density and the invariant fixed point") {
    const double hist[] = {0.3, 0.4};
    CHECK(transition_density(exp_chain(2), hist, 0.5) == doctest::Approx(std::exp(-0.5)));
    const std::vector<ChainSpec> specs = {exp_chain(1), exp_chain(2), unif_chain(1), unif_chain(2, 0.0, 2.0),
                                          chain(std::make_shared<ListenOnlyRayleigh>(20.0, 0.3), 2),
                                          chain(std::make_shared<ListenOnlyRayleigh>(20.0, 0.0), 3)};
    for (const auto& c : specs) {
        for (double a : {0.05, 0.2, 0.45}) {
            for (double b : {0.02, 0.15, 0.4}) {
                std::vector<double> next(std::size_t(c.m()), a);
                next.back() = b;
                const auto r = fixed_point_check(c, next);
                CHECK(std::abs(r.propagated - r.invariant) <= 1e-8 * std::max(1.0, r.invariant));
            }
        }
    }
}

TEST_CASE("laplace transform examples") {
    const double one[] = {1.0};
    CHECK(laplace_transform(exp_chain(1), one) == doctest::Approx(0.5).epsilon(1e-10));
    const double tiny[] = {1e-7};
    CHECK(laplace_transform(unif_chain(1), tiny) == doctest::Approx(1.0).epsilon(1e-6));
    // Stationary pairs of an Exp(1) chain are independent Exp(1), so the
    // transform at (1, 2) is 1/(1+1) * 1/(1+2).
    const double s12[] = {1.0, 2.0};
    CHECK(laplace_transform(exp_chain(2), s12) == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
    const double s123[] = {0.5, 1.0, 2.0};
    CHECK(laplace_transform(exp_chain(3), s123) == doctest::Approx(1.0 / (1.5 * 2.0 * 3.0)).epsilon(1e-9));
    const double same[] = {1.0, 1.0};
    CHECK_THROWS_AS(laplace_transform(exp_chain(2), same), std::invalid_argument);
    const double neg[] = {-1.0, 1.0};
    CHECK_THROWS_AS(laplace_transform(exp_chain(2), neg), std::invalid_argument);
    CHECK_THROWS_AS(laplace_transform(exp_chain(2), one), std::invalid_argument);
}

TEST_CASE("laplace transform agrees with the sampled chain") {
    const double s[] = {1.0, 2.0};
    const auto e = exp_chain(2);
    const auto mc = laplace_transform_monte_carlo(e, s, 400'000, 1000, 21);
    CHECK(std::abs(mc.value - laplace_transform(e, s)) <= 5.0 * mc.std_error + 1e-4);
    const auto u = unif_chain(2, 0.0, 2.0);
    const double t[] = {0.5, 3.0};
    const auto mu = laplace_transform_monte_carlo(u, t, 400'000, 1000, 22);
    CHECK(std::abs(mu.value - laplace_transform(u, t)) <= 5.0 * mu.std_error + 1e-4);
}

TEST_CASE("sampler converges to the stationary law") {
    const std::size_t steps = 101'000;
    const std::size_t burn = 1000;
    for (int m = 1; m <= 3; ++m) {
        const auto x = sample_chain(exp_chain(m), steps, burn, 100 + m).values;
        REQUIRE(x.size() == steps - burn);
        CHECK(ks_vs(x, [](double y) { return 1.0 - std::exp(-y); }) <= 0.02);
        const auto u = sample_chain(unif_chain(m), steps, burn, 200 + m).values;
        CHECK(ks_vs(u, [m](double y) { return y >= 1.0 ? 1.0 : 1.0 - std::pow(1.0 - y, m + 1); }) <= 0.02);
    }
    const auto r = chain(std::make_shared<ListenOnlyRayleigh>(20.0, 0.4), 2);
    const auto x = sample_chain(r, 30'000, burn, 7).values;
    CHECK(ks_vs(x, [&](double y) { return stationary_cdf(r, y); }) <= 0.02);
}

TEST_CASE("sampler mean for U(0,2), m = 2") {
    // E[X] = E[Y^3] / (3 E[Y^2]) = 2 / (3 * 4/3)
    const double expected = 0.5;
    const auto c = unif_chain(2, 0.0, 2.0);
    CHECK(stationary_moment(c, 1) == doctest::Approx(expected).epsilon(1e-10));
    const auto x = sample_chain(c, 1'001'000, 1000, 5).values;
    const double mean = num::summarize(x).mean;
    CHECK(std::abs(mean - expected) <= 0.01 * expected);
}

TEST_CASE("sampler is deterministic per seed") {
    const auto c = unif_chain(2);
    const auto a = sample_chain(c, 5000, 100, 3);
    const auto b = sample_chain(c, 5000, 100, 3);
    CHECK(a.values == b.values);
    CHECK(a.restarts == b.restarts);
    CHECK_FALSE(sample_chain(c, 5000, 100, 4).values == a.values);
    CHECK_THROWS(sample_chain(c, 100, 100, 3));
}

TEST_CASE("simplex identity") {
    const auto g = [](double x) { return std::exp(-x); };
    for (int m = 0; m <= 3; ++m) {
        const auto r = simplex_integral_check(m, g);
        CHECK(r.rhs == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(r.lhs - r.rhs) <= 1e-6);
    }
    const auto h = [](double x) { return 1.0 / std::pow(1.0 + x, 6); };
    const auto r2 = simplex_integral_check(2, h);
    // int x^2 (1+x)^-6 dx / 2 = B(3,3) / 2 = 1/60
    CHECK(r2.rhs == doctest::Approx(1.0 / 60.0).epsilon(1e-8));
    CHECK(std::abs(r2.lhs - r2.rhs) <= 1e-6 * r2.rhs);
    // G = e^-x makes the importance weight constant, so use the power tail
    const auto mc = simplex_integral_check(4, [](double x) { return 1.0 / std::pow(1.0 + x, 8); }, 3, 200'000);
    CHECK(mc.lhs_std_error > 0.0);
    CHECK(std::abs(mc.lhs - mc.rhs) <= 5.0 * mc.lhs_std_error);
}

TEST_CASE("double integral identity") {
    const auto g = [](double x) { return std::exp(-x); };
    const auto a = double_integral_check(1, 0, g);
    CHECK(a.rhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(a.lhs - a.rhs) <= 1e-6);
    const auto b = double_integral_check(1, 1, g);
    CHECK(b.rhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(b.lhs - b.rhs) <= 1e-6);
    const auto h = [](double x) { return 1.0 / std::pow(1.0 + x, 7); };
    for (int m = 0; m <= 2; ++m) {
        for (int j = 0; j <= 2; ++j) {
            const auto r = double_integral_check(m, j, h);
            CHECK(std::abs(r.lhs - r.rhs) <= 1e-6 * r.rhs);
        }
    }
    // with j = 0 the double integral is one dimension lower than the simplex
    // form of depth m + 1: both reduce to int z^(m+1) G / (m+1)
    const auto d0 = double_integral_check(2, 0, g);
    const auto s2 = simplex_integral_check(3, g);
    CHECK(d0.rhs == doctest::Approx(s2.rhs * 2.0).epsilon(1e-9));
}
