#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace trickle::cli {

struct CheckResult {
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double error = 0.0;      // the quantity compared against tolerance
    double tolerance = 0.0;
    bool passed = false;
    std::string note;
};

// Closed-form and cross-implementation oracles for the residual chain:
// fixed points, equilibrium laws, sampler KS, the two orthant identities,
// stationary moments and the Laplace transform against Monte Carlo.
std::vector<CheckResult> run_markov_suite(std::uint64_t seed, std::size_t sampler_steps = 100'000);

} // namespace trickle::cli
