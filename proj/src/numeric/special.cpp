#include "trickle/numeric/special.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace trickle::numeric {

double gamma(double x) { return boost::math::tgamma(x); }

double log_gamma(double x) { return boost::math::lgamma(x); }

double gamma_ratio(double a, double b) { return boost::math::tgamma_ratio(a, b); }

double erfc(double x) { return boost::math::erfc(x); }

double factorial(int n) {
    if (n < 0) throw std::domain_error("factorial of a negative integer");
    return boost::math::factorial<double>(static_cast<unsigned>(n));
}

double binomial(int n, int r) {
    if (r < 0 || n < 0 || r > n) return 0.0;
    return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(r));
}

} // namespace trickle::numeric
