#include "trickle/analytics/limits.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "trickle/analytics/single_cell.hpp"
#include "trickle/numeric/quadrature.hpp"
#include "trickle/numeric/special.hpp"

namespace trickle::analytics {

namespace {

constexpr double kSqrtPi = 1.77245385090551602730;
constexpr double kRecursionTol = 1e-8;

double f2(double t) { return 2.0 / kSqrtPi * std::exp(-t * t); }
double f3(double t) { return kSqrtPi * numeric::erfc(t); }

template <class F>
double half_line(F&& f, double t, int k) {
    numeric::QuadratureOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-13;
    // exp(-(t+v)^2) v^(k-2) is below 1e-300 well before this
    const double hi = 30.0 + 2.0 * std::sqrt(static_cast<double>(k));
    try {
        return numeric::integrate(std::forward<F>(f), 0.0, hi, {}, opt);
    } catch (const numeric::QuadratureError& e) {
        std::ostringstream os;
        os << "limiting density (k=" << k << ", t=" << t << "): " << e.what();
        throw NumericalError(os.str());
    }
}

void check_k(int k, int min_k, const char* what) {
    if (k < min_k) throw std::invalid_argument(std::string(what) + ": k too small");
}

} // namespace

double limiting_pdf_eta_pos(double t, int k, double eta) {
    check_k(k, 2, "limiting_pdf_eta_pos");
    if (!(eta > 0.0)) throw std::invalid_argument("limiting_pdf_eta_pos: eta must be > 0");
    if (t < 0.0 || t > eta) return 0.0;
    return (k - 1) / eta * std::pow(1.0 - t / eta, k - 2);
}

double limiting_pdf_eta0_recursion(double t, int k) {
    check_k(k, 2, "limiting_pdf_eta0_recursion");
    if (t < 0.0) return 0.0;
    double prev2 = f2(t);
    if (k == 2) return prev2;
    double prev1 = f3(t);
    for (int m = 4; m <= k; ++m) {
        const double next = (m - 2.0) / (m - 3.0) * prev2 -
                            numeric::gamma_ratio(0.5 * m, 0.5 * (m - 1)) * 2.0 * t / (m - 3.0) * prev1;
        prev2 = prev1;
        prev1 = next;
    }
    return prev1;
}

double limiting_pdf_eta0_quadrature(double t, int k) {
    check_k(k, 2, "limiting_pdf_eta0_quadrature");
    if (t < 0.0) return 0.0;
    const double v = half_line(
        [&](double x) { return (t + x) * std::pow(x, k - 2) * std::exp(-(t + x) * (t + x)); }, t, k);
    return 4.0 / numeric::gamma(0.5 * (k - 1)) * v;
}

double limiting_pdf_eta0_by_parts(double t, int k) {
    check_k(k, 3, "limiting_pdf_eta0_by_parts");
    if (t < 0.0) return 0.0;
    const double v = half_line([&](double x) { return std::pow(x, k - 3) * std::exp(-(t + x) * (t + x)); }, t, k);
    return 2.0 * (k - 2) / numeric::gamma(0.5 * (k - 1)) * v;
}

double limiting_pdf_eta0(double t, int k) {
    check_k(k, 2, "limiting_pdf_eta0");
    if (k == 2) return t < 0.0 ? 0.0 : f2(t);
    if (k == 3) return t < 0.0 ? 0.0 : f3(t);
    const double rec = limiting_pdf_eta0_recursion(t, k);
    const double direct = limiting_pdf_eta0_quadrature(t, k);
    if (!(std::abs(rec - direct) <= kRecursionTol)) {
        std::ostringstream os;
        os.precision(17);
        os << "limiting_pdf_eta0 (k=" << k << ", t=" << t << "): recursion " << rec << " vs quadrature "
           << direct;
        throw NumericalError(os.str());
    }
    return rec;
}

double eta0_limit_factor(int k, int j) {
    return numeric::gamma_ratio(0.5 * k, 0.5 * (k + j)) * std::pow(0.5 * k, 0.5 * j);
}

std::vector<MomentRow> limiting_exp_checks(int k, double n, double eta, int max_j) {
    const AnalyticParams p{k, n, eta};
    p.validate();
    const double scale = eta == 0.0 ? std::sqrt(n * k) : k / eta;
    std::vector<MomentRow> rows;
    for (int j = 0; j <= max_j; ++j) {
        MomentRow r;
        r.j = j;
        r.value = std::pow(scale, j) * moment_T(j, p);
        r.reference = numeric::factorial(j);
        r.rel_err = std::abs(r.value - r.reference) / r.reference;
        rows.push_back(r);
    }
    return rows;
}

} // namespace trickle::analytics
