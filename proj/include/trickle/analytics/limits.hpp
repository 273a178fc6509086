#pragma once

// Large-n (and large-k) limits of the inter-transmission time law.

#include <vector>

namespace trickle::analytics {

// eta > 0: T / eta -> Beta(1, k - 1), density (k-1)/eta (1 - t/eta)^(k-2) on [0, eta].
double limiting_pdf_eta_pos(double t, int k, double eta);

// eta = 0: density f^(k) of the limit of sqrt(n/2) T.
//   f2(t) = 2/sqrt(pi) exp(-t^2),  f3(t) = sqrt(pi) erfc(t),
// higher k by the two-step recursion
//   f^(k) = (k-2)/(k-3) f^(k-2) - Gamma(k/2)/Gamma((k-1)/2) * 2t/(k-3) * f^(k-1).
// For k >= 4 the recursion is cross-checked against limiting_pdf_eta0_quadrature
// and NumericalError is thrown if they differ by more than 1e-8.
double limiting_pdf_eta0(double t, int k);

double limiting_pdf_eta0_recursion(double t, int k);

// Direct form 4/Gamma((k-1)/2) int_0^inf (t + v) v^(k-2) exp(-(t + v)^2) dv.
double limiting_pdf_eta0_quadrature(double t, int k);

// The same density after one integration by parts of the direct form:
//   2 (k-2) / Gamma((k-1)/2) int_0^inf v^(k-3) exp(-(t + v)^2) dv,  k >= 3.
double limiting_pdf_eta0_by_parts(double t, int k);

// Gamma(k/2) (k/2)^(j/2) / Gamma((k+j)/2); tends to 1 as k grows.
double eta0_limit_factor(int k, int j);

struct MomentRow {
    int j;
    double value;      // scaled moment
    double reference;  // j!
    double rel_err;
};

// Moments of sqrt(n k) T (eta = 0) or (k / eta) T (eta > 0) for j = 0..max_j,
// next to the Exp(1) moments j!. A diagnostic for the exponential limit.
std::vector<MomentRow> limiting_exp_checks(int k, double n, double eta, int max_j = 3);

} // namespace trickle::analytics
