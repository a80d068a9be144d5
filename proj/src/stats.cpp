#include "lgas/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lgas {

BinomialCI wilson_interval(long successes, long trials, double z) {
    BinomialCI ci;
    ci.successes = successes;
    ci.trials = trials;
    if (trials <= 0) {
        ci.hi = 1.0;
        return ci;
    }
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    ci.estimate = p;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ci.lo = std::max(0.0, center - half);
    ci.hi = std::min(1.0, center + half);
    return ci;
}

double RunningStats::sd() const { return std::sqrt(variance()); }

double RunningStats::sem() const {
    return n > 0 ? sd() / std::sqrt(static_cast<double>(n)) : 0.0;
}

double ks_two_sample(std::vector<double>& a, std::vector<double>& b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size(), m = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < n && j < m) {
        double v = std::min(a[i], b[j]);
        while (i < n && a[i] <= v) ++i;
        while (j < m && b[j] <= v) ++j;
        double diff = std::fabs(static_cast<double>(i) / static_cast<double>(n) -
                                static_cast<double>(j) / static_cast<double>(m));
        if (diff > d) d = diff;
    }
    return d;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double c) {
    double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("fit_quadratic: need >= 3 points");
    // Normal equations for the Vandermonde system [x^2 x 1].
    double s[5] = {0, 0, 0, 0, 0};
    double t[3] = {0, 0, 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        double xi = x[i], p = 1.0;
        for (int k = 0; k <= 4; ++k) {
            s[k] += p;
            p *= xi;
        }
        t[0] += y[i];
        t[1] += y[i] * xi;
        t[2] += y[i] * xi * xi;
    }
    // Solve the symmetric 3x3 system by Gaussian elimination.
    double A[3][4] = {
        {s[4], s[3], s[2], t[2]},
        {s[3], s[2], s[1], t[1]},
        {s[2], s[1], s[0], t[0]},
    };
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        std::swap(A[piv], A[col]);
        if (A[col][col] == 0.0) throw std::runtime_error("fit_quadratic: singular system");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = A[r][col] / A[col][col];
            for (int cc = col; cc < 4; ++cc) A[r][cc] -= f * A[col][cc];
        }
    }
    QuadraticFit fit;
    fit.a = A[0][3] / A[0][0];
    fit.b = A[1][3] / A[1][1];
    fit.c = A[2][3] / A[2][2];

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double pred = fit.a * x[i] * x[i] + fit.b * x[i] + fit.c;
        num += (y[i] - pred) * (y[i] - pred);
        den += y[i] * y[i];
    }
    fit.relative_residual = den > 0 ? std::sqrt(num / den) : 0.0;
    return fit;
}

double batch_means_sem(const std::vector<double>& series, std::size_t n_batches) {
    if (series.empty()) return 0.0;
    n_batches = std::min(n_batches, series.size());
    if (n_batches < 2) n_batches = 2;
    std::size_t batch = series.size() / n_batches;
    if (batch == 0) batch = 1;
    RunningStats batches;
    for (std::size_t b = 0; b + 1 <= n_batches; ++b) {
        std::size_t begin = b * batch;
        std::size_t end = (b + 1 == n_batches) ? series.size() : begin + batch;
        if (begin >= end) break;
        double m = 0.0;
        for (std::size_t i = begin; i < end; ++i) m += series[i];
        batches.add(m / static_cast<double>(end - begin));
    }
    return batches.sd() / std::sqrt(static_cast<double>(batches.n));
}

}  // namespace lgas
