#pragma once

// Single-cell inter-transmission time distributions and message counts under
// the Poisson attempt model. Time is measured in units of tau_h = 1.
//
// For k >= 2 the k - 1 most recent inter-transmission times form a chain of
// iterated residuals of the k = 1 lifetime
//     F1(t) = 1 - exp(-n (t - eta)^2 / (2 (1 - eta))),  t >= eta,
// so everything reduces to the normalization constant
//     C(k, n) = (k - 1)! / E[T1^(k - 1)].

#include <span>
#include <stdexcept>

namespace trickle::analytics {

// Two independent evaluations of one quantity disagreed beyond tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AnalyticParams {
    int k = 1;
    double n = 1.0;    // cell size
    double eta = 0.0;

    void validate() const;  // throws trickle::ConfigError
};

// Rate of successful broadcasts t after a transmission (k = 1). For eta = 1
// all mass sits at t = 1, reported as +inf there.
double hazard_unconditional(double t, const AnalyticParams& p);

// Same rate conditioned on the previous gap being v (k = 2).
double hazard_conditional(double t, double v, const AnalyticParams& p);

double cdf_T1(double t, const AnalyticParams& p);
double pdf_T1(double t, const AnalyticParams& p);
double mean_T1(const AnalyticParams& p);  // eta + sqrt(pi (1 - eta) / (2 n))
double mean_N1(const AnalyticParams& p);  // 1 / mean_T1

double conditional_cdf_T2(double t, double v, const AnalyticParams& p);

struct NormConstForms {
    double quadrature;
    double finite_sum;
};

// Both evaluations of C(k, n); for k = 1 both equal 1.
NormConstForms norm_const_forms(const AnalyticParams& p);

// C(k, n). Cached per (k, n, eta); the first evaluation asserts agreement
// of the two forms to 1e-10 relative and throws NumericalError otherwise.
double norm_const(const AnalyticParams& p);

// Stationary joint density of k - 1 consecutive gaps (`t` has k - 1 entries).
double joint_density(std::span<const double> t, const AnalyticParams& p);

// Stationary density of the sum of k - 1 consecutive gaps (k >= 2).
double sigma_density(double s, const AnalyticParams& p);

double pdf_T(double t, const AnalyticParams& p);
double cdf_T(double t, const AnalyticParams& p);

// E[T^j] = j! C(k, n) / C(k + j, n).
double moment_T(int j, const AnalyticParams& p);

// Closed forms: eta = 0 exact moment j! (2n)^{-j/2} Gamma(k/2) / Gamma((k+j)/2),
// and the n -> inf limit for eta > 0, (k-1)! j! / (k+j-1)! eta^j.
double moment_T_eta0(int j, const AnalyticParams& p);
double moment_T_limit(int j, int k, double eta);

// Expected transmissions per interval, C(k + 1, n) / C(k, n).
double mean_N(const AnalyticParams& p);

// Large-n forms: sqrt(2n) Gamma((k+1)/2) / Gamma(k/2) for eta = 0,
// k/eta - (k/eta^2) sqrt(pi (1 - eta) / (2n)) for eta > 0.
double mean_N_asymptotic(const AnalyticParams& p);

} // namespace trickle::analytics
