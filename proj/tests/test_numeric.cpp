#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>
#include <vector>

#include "trickle/numeric/format.hpp"
#include "trickle/numeric/quadrature.hpp"
#include "trickle/numeric/rng.hpp"
#include "trickle/numeric/special.hpp"
#include "trickle/numeric/stats.hpp"

using namespace trickle::numeric;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("quadrature on finite intervals") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
    // kink at 0.3 handled by a breakpoint
    const double v = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, {0.3});
    CHECK(v == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-13));
}

TEST_CASE("quadrature on the half line") {
    QuadratureOptions opt;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-12;
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, kInf, {}, opt) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, 0.0, kInf, {}, opt) ==
          doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-12));
    CHECK(integrate([](double x) { return x * x * x * std::exp(-x); }, 0.0, kInf, {}, opt) ==
          doctest::Approx(6.0).epsilon(1e-11));
}

TEST_CASE("quadrature reports failures") {
    QuadratureOptions opt;
    opt.max_panels = 50;
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, {}, opt), QuadratureError);
    CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0.0, 1.0), QuadratureError);
    CHECK_THROWS_AS(integrate([](double x) { return x; }, -kInf, 0.0), std::invalid_argument);
}

TEST_CASE("quadrature error estimate is scaled to the panel") {
    // A smooth integrand on a short interval must converge on the first panels.
    const auto r = integrate_detailed([](double x) { return std::exp(x); }, 0.0, 1e-3);
    CHECK(r.panels <= 2);
    CHECK(r.error < 1e-15);
}

TEST_CASE("special functions") {
    CHECK(trickle::numeric::gamma(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-15));
    CHECK(trickle::numeric::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK(trickle::numeric::log_gamma(101.0) == doctest::Approx(363.73937555556347).epsilon(1e-15));
    CHECK(trickle::numeric::gamma_ratio(1.5, 1.0) == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-15));
    // large arguments where the raw ratio would overflow
    CHECK(trickle::numeric::gamma_ratio(200.5, 200.0) == doctest::Approx(std::exp(log_gamma(200.5) - log_gamma(200.0))).epsilon(1e-12));
    CHECK(trickle::numeric::erfc(0.0) == 1.0);
    CHECK(trickle::numeric::erfc(1.0) == doctest::Approx(0.15729920705028513).epsilon(1e-15));
    CHECK(trickle::numeric::erfc(5.0) == doctest::Approx(1.5374597944280349e-12).epsilon(1e-14));
    CHECK(factorial(0) == 1.0);
    CHECK(factorial(10) == 3628800.0);
    CHECK(binomial(5, 2) == 10.0);
    CHECK(binomial(3, 4) == 0.0);
    CHECK_THROWS(factorial(-1));
}

TEST_CASE("KS statistic on a hand example") {
    // samples 0.1, 0.5, 0.9 against U(0,1): D = max(1/3 - 0.1, 0.5 - 1/3, 2/3 - 0.5, 1 - 0.9, 0.9 - 2/3)
    const double d = ks_statistic({0.9, 0.1, 0.5}, [](double x) { return x; });
    CHECK(d == doctest::Approx(0.23333333333333334).epsilon(1e-12));
    CHECK(ks_statistic({}, [](double x) { return x; }) == 0.0);
}

TEST_CASE("KS p-value and critical value") {
    // Kolmogorov limit law: P(K > 1.3581) = 0.05
    const std::size_t n = 1'000'000;
    CHECK(ks_p_value(1.3581 / std::sqrt(double(n)), n) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(ks_p_value(0.0, 100) == 1.0);
    CHECK(ks_p_value(0.5, 1000) < 1e-100);
    CHECK(ks_critical_value(0.05, 10000) == doctest::Approx(0.01358).epsilon(1e-3));
}

TEST_CASE("KS accepts uniform draws") {
    RandomStream rng(3);
    std::vector<double> x(20000);
    for (auto& v : x) v = rng.uniform();
    const double d = ks_statistic(x, [](double v) { return v; });
    CHECK(ks_p_value(d, x.size()) > 0.01);
}

TEST_CASE("summary and spearman") {
    const double v[] = {1.0, 2.0, 3.0, 4.0};
    const auto s = summarize(v);
    CHECK(s.count == 4);
    CHECK(s.mean == 2.5);
    CHECK(s.std_dev == doctest::Approx(std::sqrt(5.0 / 3.0)));
    const double x[] = {1, 2, 3, 4, 5};
    const double up[] = {1, 4, 9, 16, 25};
    const double down[] = {5, 4, 3, 2, 1};
    const double ties[] = {1, 1, 2, 2, 3};
    CHECK(spearman(x, up) == doctest::Approx(1.0));
    CHECK(spearman(x, down) == doctest::Approx(-1.0));
    CHECK(spearman(x, ties) == doctest::Approx(0.9486832980505138));
}

TEST_CASE("density histogram has unit area") {
    RandomStream rng(8);
    std::vector<double> x(5000);
    for (auto& v : x) v = -std::log(rng.uniform_open());
    const auto bins = density_histogram(x, 60);
    REQUIRE(bins.size() == 60);
    double area = 0.0;
    for (const auto& b : bins) area += b.density * (b.hi - b.lo);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bins.front().lo == 0.0);
    CHECK(bins.back().hi == doctest::Approx(*std::max_element(x.begin(), x.end())));
}

TEST_CASE("random streams are deterministic and split independently") {
    RandomStream a(42);
    RandomStream b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    // split depends only on the seed, not on how far the parent advanced
    RandomStream c(42);
    c.uniform();
    CHECK(RandomStream(42).split(7).next_u64() == c.split(7).next_u64());
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(1, i));
    CHECK(seeds.size() == 1000);
    RandomStream d(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = d.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("real formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 5.641895835477563, 1e-300, 123456789.0}) {
        CHECK(std::strtod(format_real(v).c_str(), nullptr) == v);
    }
}
