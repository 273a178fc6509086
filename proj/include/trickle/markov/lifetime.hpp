#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trickle::markov {

// A requested quantity does not exist (infinite moment, quadrature that
// does not converge, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A continuous lifetime Y on (support_lo, support_hi), support_lo >= 0.
//
// Only cdf() is mandatory. Everything else has a generic fallback:
//   pdf           central difference of cdf
//   moment(j)     j * int_0^inf y^(j-1) (1 - F(y)) dy by quadrature
//   inverse_cdf   bisection on cdf, 80 iterations
//   inverse_survival  bisection on 1 - cdf, 80 iterations
// Concrete distributions override these with closed forms where they exist.
class LifetimeDistribution {
public:
    virtual ~LifetimeDistribution() = default;

    virtual double cdf(double t) const = 0;
    virtual double survival(double t) const { return 1.0 - cdf(t); }
    virtual double pdf(double t) const;

    virtual double support_lo() const { return 0.0; }
    virtual double support_hi() const { return std::numeric_limits<double>::infinity(); }

    // Raw moment E[Y^j]; throws DomainError when it is not finite.
    virtual double moment(int j) const;

    virtual double inverse_cdf(double u) const;
    // Smallest t with survival(t) <= q. Accurate for tiny q where
    // inverse_cdf(1 - q) would lose all precision.
    virtual double inverse_survival(double q) const;

    // Points where the density is not smooth; used to split quadrature.
    virtual std::vector<double> breakpoints() const { return {}; }

    // Beyond this point survival() is below double resolution.
    virtual std::optional<double> tail_bound() const { return std::nullopt; }

    virtual std::string name() const = 0;

    // Cumulative hazard -log(1 - F(t)).
    double cumulative_hazard(double t) const;

private:
    double bracket_hi(double start) const;
};

class Exponential final : public LifetimeDistribution {
public:
    explicit Exponential(double rate = 1.0);

    double cdf(double t) const override;
    double survival(double t) const override;
    double pdf(double t) const override;
    double moment(int j) const override;
    double inverse_cdf(double u) const override;
    double inverse_survival(double q) const override;
    std::string name() const override;

    double rate() const { return rate_; }

private:
    double rate_;
};

class Uniform final : public LifetimeDistribution {
public:
    Uniform(double lo, double hi);

    double cdf(double t) const override;
    double pdf(double t) const override;
    double support_lo() const override { return lo_; }
    double support_hi() const override { return hi_; }
    double moment(int j) const override;
    double inverse_cdf(double u) const override;
    double inverse_survival(double q) const override;
    std::vector<double> breakpoints() const override { return {lo_, hi_}; }
    std::string name() const override;

private:
    double lo_;
    double hi_;
};

// Time to the first successful broadcast after a transmission in a cell of
// n nodes with listen-only fraction eta < 1 (Poisson attempt model):
//     F(t) = 1 - exp(-(n / 2) (t - eta)^2 / (1 - eta)),  t >= eta.
// sqrt(n / (1 - eta)) (Y - eta) is Rayleigh with unit scale. Moments are
// left to the generic quadrature.
class ListenOnlyRayleigh final : public LifetimeDistribution {
public:
    ListenOnlyRayleigh(double n, double eta);

    double cdf(double t) const override;
    double survival(double t) const override;
    double pdf(double t) const override;
    double support_lo() const override { return eta_; }
    double inverse_cdf(double u) const override;
    double inverse_survival(double q) const override;
    std::vector<double> breakpoints() const override { return {eta_}; }
    std::optional<double> tail_bound() const override;
    std::string name() const override;

private:
    double n_;
    double eta_;
    double half_rate_;  // n / (2 (1 - eta))
};

// A distribution assembled from callables, for ad-hoc lifetimes in tests
// and validation harnesses.
class FunctionLifetime final : public LifetimeDistribution {
public:
    struct Parts {
        std::function<double(double)> cdf;
        std::function<double(double)> pdf;          // optional
        std::function<double(double)> inverse_cdf;  // optional
        double support_lo = 0.0;
        double support_hi = std::numeric_limits<double>::infinity();
        std::string name = "function";
    };

    explicit FunctionLifetime(Parts parts);

    double cdf(double t) const override { return parts_.cdf(t); }
    double pdf(double t) const override;
    double support_lo() const override { return parts_.support_lo; }
    double support_hi() const override { return parts_.support_hi; }
    double inverse_cdf(double u) const override;
    std::string name() const override { return parts_.name; }

private:
    Parts parts_;
};

} // namespace trickle::markov
