// SPDX-License-Identifier: Apache-2.0

#include "mimofb/stats.hpp"

#include "mimofb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mimofb {

double pairwise_sum(const double *x, std::size_t n) {
    // Recurse down to short runs; the fixed split point makes the summation
    // tree a pure function of n, independent of who computed the elements.
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; i++)
            s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double pairwise_sum(const std::vector<double> &x) { return pairwise_sum(x.data(), x.size()); }

MeanSummary summarize_mean(const std::vector<double> &x) {
    MeanSummary out;
    out.count = x.size();
    if (x.empty())
        return out;
    out.mean = pairwise_sum(x) / static_cast<double>(x.size());
    if (x.size() < 2)
        return out;
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); i++) {
        const double d = x[i] - out.mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(x.size() - 1);
    out.standard_error = std::sqrt(var / static_cast<double>(x.size()));
    return out;
}

// ---------------------------------------------------------------------
// Kolmogorov–Smirnov
// ---------------------------------------------------------------------

double ks_p_value(double statistic, double effective_n) {
    if (effective_n <= 0.0)
        throw std::invalid_argument("ks_p_value: effective sample size must be positive");
    const double sn = std::sqrt(effective_n);
    const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
    // Alternating series for the Kolmogorov tail; converges in a handful of
    // terms for any lambda of practical interest.
    double sum = 0.0;
    double sign = 1.0;
    bool converged = false;
    for (int k = 1; k <= 100; k++) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-16 * std::fabs(sum) + 1e-300) {
            converged = true;
            break;
        }
        sign = -sign;
    }
    // The series only stalls when lambda is tiny, where the tail probability
    // is 1 to double precision.
    if (!converged)
        return 1.0;
    const double p = 2.0 * sum;
    return std::min(1.0, std::max(0.0, p));
}

KsResult ks_test_cdf(std::vector<double> samples, const std::function<double(double)> &cdf) {
    if (samples.empty())
        throw std::invalid_argument("ks_test_cdf: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); i++) {
        const double f = cdf(samples[i]);
        const double lo = f - static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n - f;
        d = std::max(d, std::max(lo, hi));
    }
    KsResult r;
    r.statistic = d;
    r.n = samples.size();
    r.p_value = ks_p_value(d, n);
    return r;
}

KsResult ks_test_uniform(std::vector<double> samples) {
    return ks_test_cdf(std::move(samples), [](double x) {
        return std::min(1.0, std::max(0.0, x));
    });
}

KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_test_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0;
    std::size_t ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double va = a[ia];
        const double vb = b[ib];
        if (va <= vb)
            ia++;
        if (vb <= va)
            ib++;
        const double diff =
            std::fabs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb);
        d = std::max(d, diff);
    }
    KsResult r;
    r.statistic = d;
    const double ne = na * nb / (na + nb);
    r.n = static_cast<std::size_t>(ne);
    r.p_value = ks_p_value(d, ne);
    return r;
}

// ---------------------------------------------------------------------
// Quadrature and regression
// ---------------------------------------------------------------------

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)> &f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
    if (depth > 60)
        throw numeric_error("integrate_adaptive: recursion limit reached");
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    // The computed defect carries rounding noise of order eps * |piece|, so a
    // tolerance below that can never be met; the floor concedes ~1e-15
    // relative error per piece instead of recursing forever.
    const double floor = 1e-15 * (std::fabs(left) + std::fabs(right));
    if (std::fabs(delta) <= 15.0 * tol + floor)
        return left + right + delta / 15.0; // Richardson correction
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)> &f, double a, double b,
                          double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("integrate_adaptive: tolerance must be positive");
    if (a == b)
        return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 0);
}

LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need two or more paired points");
    const double n = static_cast<double>(x.size());
    const double mx = pairwise_sum(x) / n;
    const double my = pairwise_sum(y) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); i++) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_line: degenerate abscissae");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0) {
        fit.r_squared = 1.0; // constant data is fit exactly
        return fit;
    }
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); i++) {
        const double e = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += e * e;
    }
    fit.r_squared = 1.0 - ss_res / syy;
    return fit;
}

} // namespace mimofb
