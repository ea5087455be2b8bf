// SPDX-License-Identifier: Apache-2.0
//
// AS 241 inverse normal CDF and sequential draw helpers.  (The Philox block
// function itself is inline in the header.)

#include "mimofb/rng.hpp"

#include <cmath>

namespace mimofb {

// ---------------------------------------------------------------------
// AS 241: inverse of the standard normal CDF (Wichura, 1988)
// ---------------------------------------------------------------------
//
// Three rational minimax fits: a central region |p - 1/2| <= 0.425 in the
// variable r = 0.180625 - q^2, and two tail regions in r = sqrt(-log(min(p,
// 1-p))) split at r = 5.  Relative error is below 1e-15 across (0,1).

namespace {

inline double poly7(const double *c, double x) {
    return ((((((c[7] * x + c[6]) * x + c[5]) * x + c[4]) * x + c[3]) * x + c[2]) * x + c[1]) * x +
           c[0];
}

constexpr double kCentralNum[8] = {
    3.3871328727963666080e0,  1.3314166789178437745e+2, 1.9715909503065514427e+3,
    1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
    3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr double kCentralDen[8] = {
    1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
    5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
    2.8729085735721942674e+4, 5.2264952788528545610e+3};
constexpr double kMiddleNum[8] = {
    1.42343711074968357734e0,  4.63033784615654529590e0,  5.76949722146069140550e0,
    3.64784832476320460504e0,  1.27045825245236838258e0,  2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kMiddleDen[8] = {
    1.0,                       2.05319162663775882187e0,  1.67638483018380384940e0,
    6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9};
constexpr double kTailNum[8] = {
    6.65790464350110377720e0,  5.46378491116411436990e0,  1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kTailDen[8] = {
    1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
    1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15};

} // namespace

double inverse_normal_cdf(double p) {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly7(kCentralNum, r) / poly7(kCentralDen, r);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    // u64_to_unit never produces 0 or 1; clamp anyway so that stray callers
    // get the signed infinity the limit demands instead of NaN.
    if (r <= 0.0)
        return (q < 0.0) ? -HUGE_VAL : HUGE_VAL;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        const double s = r - 1.6;
        value = poly7(kMiddleNum, s) / poly7(kMiddleDen, s);
    } else {
        const double s = r - 5.0;
        value = poly7(kTailNum, s) / poly7(kTailDen, s);
    }
    return (q < 0.0) ? -value : value;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// ---------------------------------------------------------------------
// Rng convenience draws
// ---------------------------------------------------------------------

std::complex<double> Rng::next_cnormal() {
    // Unit-variance circularly-symmetric complex Gaussian: each part has
    // variance 1/2.
    constexpr double kHalfSqrt = 0.70710678118654752440; // 1/sqrt(2)
    const double re = next_normal() * kHalfSqrt;
    const double im = next_normal() * kHalfSqrt;
    return {re, im};
}

arma::cx_vec Rng::cnormal_vector(arma::uword n) {
    arma::cx_vec v(n);
    for (arma::uword i = 0; i < n; i++)
        v[i] = next_cnormal();
    return v;
}

} // namespace mimofb
