#include "trickle/numeric/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace trickle::numeric {

namespace {

// Q_KS(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)
double kolmogorov_tail(double lambda) {
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

std::vector<double> ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t q = i; q <= j; ++q) r[order[q]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

double ks_p_value(double statistic, std::size_t sample_size) {
    const double sn = std::sqrt(static_cast<double>(sample_size));
    return kolmogorov_tail((sn + 0.12 + 0.11 / sn) * statistic);
}

double ks_critical_value(double alpha, std::size_t sample_size) {
    // c(alpha) = sqrt(-ln(alpha / 2) / 2), the leading term of the limit law.
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c / std::sqrt(static_cast<double>(sample_size));
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std_dev = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
    return s;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 2) return 0.0;
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const auto sx = summarize(rx);
    const auto sy = summarize(ry);
    if (sx.std_dev == 0.0 || sy.std_dev == 0.0) return 0.0;
    double cov = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) cov += (rx[i] - sx.mean) * (ry[i] - sy.mean);
    cov /= static_cast<double>(rx.size() - 1);
    return cov / (sx.std_dev * sy.std_dev);
}

std::vector<HistogramBin> density_histogram(std::span<const double> values, std::size_t bins) {
    if (bins == 0) throw std::invalid_argument("density_histogram: bins must be positive");
    std::vector<HistogramBin> out;
    if (values.empty()) return out;
    const double top = *std::max_element(values.begin(), values.end());
    const double width = top > 0.0 ? top / static_cast<double>(bins) : 1.0;
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        auto idx = static_cast<std::size_t>(v / width);
        if (idx >= bins) idx = bins - 1;
        ++counts[idx];
    }
    const double norm = 1.0 / (static_cast<double>(values.size()) * width);
    out.reserve(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out.push_back({width * static_cast<double>(b), width * static_cast<double>(b + 1),
                       static_cast<double>(counts[b]) * norm});
    }
    return out;
}

} // namespace trickle::numeric
