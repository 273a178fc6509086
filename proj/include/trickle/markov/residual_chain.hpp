#pragma once

// Markov chains of iterated residual lifetimes.
//
// Given a lifetime Y with CDF F and memory depth m, the chain X evolves as
//     P[X_{i+1} <= y | last m values sum to s] = P[Y <= s + y | Y >= s].
// With E[Y^m] finite the window (X_i, ..., X_{i+m-1}) has invariant density
//     pi(x) = C_m (1 - F(x_1 + ... + x_m)),   C_m = m! / E[Y^m],
// and a single coordinate has stationary CDF
//     Pi(y) = 1 - (m / E[Y^m]) int_0^inf (1 - F(s + y)) s^(m-1) ds.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "trickle/markov/lifetime.hpp"

namespace trickle::markov {

// A lifetime together with a memory depth. Construction checks numerically
// that E[Y^m] is finite and caches it; throws DomainError otherwise.
class ChainSpec {
public:
    ChainSpec(std::shared_ptr<const LifetimeDistribution> dist, int m);

    const LifetimeDistribution& dist() const { return *dist_; }
    std::shared_ptr<const LifetimeDistribution> dist_ptr() const { return dist_; }
    int m() const { return m_; }
    double mth_moment() const { return mth_moment_; }
    double normalization() const { return normalization_; }  // C_m

private:
    std::shared_ptr<const LifetimeDistribution> dist_;
    int m_;
    double mth_moment_;
    double normalization_;
};

double stationary_cdf(const ChainSpec& spec, double y);

// Derivative of stationary_cdf: (m / E[Y^m]) int_0^inf f(s + y) s^(m-1) ds.
double stationary_pdf(const ChainSpec& spec, double y);

// C_m (1 - F(sum x)). `x` must hold m non-negative values.
double invariant_density(const ChainSpec& spec, std::span<const double> x);

// Stationary density of the window sum: (m / E[Y^m]) s^(m-1) (1 - F(s)).
double sum_density(const ChainSpec& spec, double s);

// E[X^j] = E[Y^(m+j)] / (binom(m+j, j) E[Y^m]).
double stationary_moment(const ChainSpec& spec, int j);

// One-step transition density y | history: f(sum + y) / (1 - F(sum)).
double transition_density(const ChainSpec& spec, std::span<const double> history, double y);

struct FixedPointCheck {
    double propagated;  // int pi(x_1, next[0..m-2]) p(next[m-1] | x_1, next[0..m-2]) dx_1
    double invariant;   // pi(next)
};

// Pushes the invariant density through one transition by quadrature over
// the coordinate that leaves the window and compares with pi(next_state).
FixedPointCheck fixed_point_check(const ChainSpec& spec, std::span<const double> next_state);

// Multivariate Laplace transform of the stationary window,
//     C_m sum_i (1 - L_Y(s_i)) / s_i * prod_{j != i} 1 / (s_j - s_i),
// with (1 - L_Y(s)) / s = int_0^inf e^{-s y} (1 - F(y)) dy evaluated by
// quadrature. Requires m pairwise distinct positive arguments; throws
// std::invalid_argument otherwise.
double laplace_transform(const ChainSpec& spec, std::span<const double> s);

struct ChainSample {
    std::vector<double> values;     // post burn-in
    std::size_t restarts = 0;       // absorbing-boundary resamples of the initial state
};

// Simulates the chain by conditional inverse sampling of the overshoot:
//     X = F^{-1}(F(sigma) + u (1 - F(sigma))) - sigma,
// evaluated in survival form for accuracy. The initial window holds m
// independent draws of Y; a window with 1 - F(sigma) == 0 is redrawn and
// counted in `restarts`. Requires steps > burn_in.
ChainSample sample_chain(const ChainSpec& spec, std::size_t steps, std::size_t burn_in, std::uint64_t seed);

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// E[exp(-sum_i s_i X_{t+i})] averaged over consecutive windows of a chain path.
MonteCarloEstimate laplace_transform_monte_carlo(const ChainSpec& spec, std::span<const double> s,
                                                 std::size_t steps, std::size_t burn_in,
                                                 std::uint64_t seed);

} // namespace trickle::markov
