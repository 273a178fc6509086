#pragma once

namespace trickle::numeric {

double gamma(double x);
double log_gamma(double x);

// Gamma(a) / Gamma(b) without forming either factor; safe for large arguments.
double gamma_ratio(double a, double b);

double erfc(double x);

// n! as a double; exact up to n = 22.
double factorial(int n);

// Binomial coefficient C(n, r) as a double.
double binomial(int n, int r);

} // namespace trickle::numeric
