#pragma once

// Multi-cell estimate: a side x side grid where every node hears the S
// nodes within range R behaves like side^2 / S independent cells of size S.

namespace trickle::analytics {

struct GridParams {
    int side = 1;
    double range = 1.0;
    double eta = 0.0;
    int k = 1;

    void validate() const;  // throws trickle::ConfigError
};

// round(pi R^2), at least 1.
int continuum_cell_size(double range);

// side^2 / S * C(k + 1, S) / C(k, S)
double multicell_estimate(const GridParams& g, int cell_size);

// Large-R forms with S ~ pi R^2:
//   eta = 0: sqrt(2/pi) side^2 / R * Gamma((k+1)/2) / Gamma(k/2)
//   eta > 0: side^2 / R^2 * k / (pi eta)
double multicell_large_range(const GridParams& g);

// simulated / estimate
double multicell_ratio(double simulated_mean, const GridParams& g, int cell_size);

} // namespace trickle::analytics
