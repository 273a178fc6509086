#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace trickle::numeric {

// One-sample Kolmogorov-Smirnov distance sup |F_n - F| for a continuous
// reference CDF. Samples need not be sorted.
template <class Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
    if (samples.empty()) return 0.0;
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, hi - f, f - lo});
    }
    return d;
}

// Asymptotic p-value of the one-sample KS statistic (Kolmogorov limit law
// with Stephens' finite-sample correction).
double ks_p_value(double statistic, std::size_t sample_size);

// Critical value of the KS statistic at significance `alpha` for large samples.
double ks_critical_value(double alpha, std::size_t sample_size);

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // sample standard deviation (n - 1)
};

Summary summarize(std::span<const double> values);

// Spearman rank correlation; ties receive their average rank.
double spearman(std::span<const double> x, std::span<const double> y);

struct HistogramBin {
    double lo;
    double hi;
    double density;
};

// Equal-width bins over [0, max(values)], normalized to unit area.
std::vector<HistogramBin> density_histogram(std::span<const double> values, std::size_t bins);

} // namespace trickle::numeric
