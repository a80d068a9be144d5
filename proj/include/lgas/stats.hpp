#pragma once
// Small statistics toolbox: binomial confidence intervals, Kolmogorov-Smirnov
// tests, running moments, least-squares quadratic fits.

#include <cstddef>
#include <vector>

namespace lgas {

/// Wilson score interval for a binomial proportion.
struct BinomialCI {
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    long successes = 0;
    long trials = 0;
};

/// 95% two-sided Wilson interval (z = 1.96) unless another z is given.
BinomialCI wilson_interval(long successes, long trials, double z = 1.96);

struct RunningStats {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double sd() const;
    double sem() const;  // sd / sqrt(n)
};

/// Two-sample KS statistic sup|F1 - F2|. Inputs are sorted in place.
double ks_two_sample(std::vector<double>& a, std::vector<double>& b);

/// Critical value for the two-sample test: c(alpha) * sqrt((n+m)/(n*m)),
/// with c = 1.628 at the 1% level.
double ks_two_sample_critical(std::size_t n, std::size_t m, double c = 1.628);

/// One-sample KS statistic against a CDF given as callable on sorted data.
template <class Cdf>
double ks_one_sample(std::vector<double>& sorted_ascending, Cdf cdf) {
    const std::size_t n = sorted_ascending.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = cdf(sorted_ascending[i]);
        double lo = f - static_cast<double>(i) / static_cast<double>(n);
        double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
        if (lo > d) d = lo;
        if (hi > d) d = hi;
    }
    return d;
}

/// Least-squares fit y ~ a*x^2 + b*x + c. Returns {a, b, c}.
struct QuadraticFit {
    double a = 0.0, b = 0.0, c = 0.0;
    /// ||y - fit||_2 / ||y||_2
    double relative_residual = 0.0;
};
QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y);

/// Standard error of the mean from batch means (robust to serial correlation).
double batch_means_sem(const std::vector<double>& series, std::size_t n_batches = 100);

}  // namespace lgas
