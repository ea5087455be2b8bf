// SPDX-License-Identifier: Apache-2.0
//
// Small statistical toolbox: deterministic summation, moment summaries,
// Kolmogorov–Smirnov tests, adaptive quadrature and least-squares lines.

#ifndef MIMOFB_STATS_HPP
#define MIMOFB_STATS_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace mimofb {

// Pairwise (cascade) summation.  Used everywhere results of parallel loops
// are aggregated: the summation tree depends only on the element order, so
// totals are bit-identical for any worker count.
double pairwise_sum(const double *x, std::size_t n);
double pairwise_sum(const std::vector<double> &x);

// Mean and standard error of the mean, both computed with pairwise sums.
struct MeanSummary {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t count = 0;
};
MeanSummary summarize_mean(const std::vector<double> &x);

// ---------------------------------------------------------------------
// Kolmogorov–Smirnov tests
// ---------------------------------------------------------------------

struct KsResult {
    double statistic = 0.0; // sup-norm distance between the compared CDFs
    double p_value = 0.0;   // asymptotic significance (small => reject)
    std::size_t n = 0;      // effective sample size
};

// One-sample test of `samples` against a reference CDF.
KsResult ks_test_cdf(std::vector<double> samples,
                     const std::function<double(double)> &cdf);

// One-sample test against U(0,1).
KsResult ks_test_uniform(std::vector<double> samples);

// Two-sample test.
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

// Asymptotic Kolmogorov tail probability Q(lambda) = 2 sum_k (-1)^{k-1}
// exp(-2 k^2 lambda^2), with the usual finite-sample correction applied to
// the statistic before evaluation.
double ks_p_value(double statistic, double effective_n);

// ---------------------------------------------------------------------
// Quadrature and regression
// ---------------------------------------------------------------------

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)> &f, double a, double b,
                          double tol = 1e-12);

// Ordinary least-squares line y ~ slope*x + intercept with the coefficient
// of determination.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y);

} // namespace mimofb

#endif // MIMOFB_STATS_HPP
