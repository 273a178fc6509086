#pragma once

// Numerical self-tests for the two orthant-integral identities behind the
// invariant-density normalization and the stationary moments:
//
//   simplex:  int_{R_+^{m+1}} G(x_1 + ... + x_{m+1}) dx = int_0^inf x^m G(x) / m! dx
//   double:   int_0^inf int_0^inf x^j y^m G(x + y) dx dy
//               = [(m + 1) binom(m + j + 1, j)]^{-1} int_0^inf z^{m+j+1} G(z) dz

#include <cstdint>
#include <functional>

namespace trickle::markov {

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double lhs_std_error = 0.0;  // non-zero only for the Monte Carlo route
};

// Nested (m+1)-dimensional quadrature for m <= 3; beyond that the left side
// is a Monte Carlo estimate with Gamma(m+1) importance sampling. Throws
// DomainError when a quadrature does not converge.
IdentityCheck simplex_integral_check(int m, const std::function<double(double)>& g,
                                     std::uint64_t seed = 1, std::size_t mc_samples = 1'000'000);

IdentityCheck double_integral_check(int m, int j, const std::function<double(double)>& g);

} // namespace trickle::markov
