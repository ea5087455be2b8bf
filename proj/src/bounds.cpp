// SPDX-License-Identifier: Apache-2.0

#include "mimofb/bounds.hpp"

#include "mimofb/rng.hpp"
#include "mimofb/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace mimofb {

double sphere_cdf(double z, arma::uword dim) {
    if (!(z >= 0.0) || z > 1.0)
        throw std::invalid_argument("sphere_cdf: z must lie in [0, 1]");
    if (dim < 1)
        throw std::invalid_argument("sphere_cdf: dimension must be >= 1");
    if (dim == 1)
        return z < 1.0 ? 0.0 : 1.0; // the squared cosine is identically 1
    return 1.0 - std::pow(1.0 - z, static_cast<double>(dim - 1));
}

double max_z_cdf(double z, arma::uword dim, arma::uword bits) {
    if (bits > 63)
        throw std::invalid_argument("max_z_cdf: bit count out of range");
    const double single = sphere_cdf(z, dim);
    if (single <= 0.0)
        return 0.0;
    // [F(z)]^(2^B) through the log to stay accurate for huge exponents.
    return std::exp(std::exp2(static_cast<double>(bits)) * std::log(single));
}

double quant_error_bound(double bits, arma::uword rank) {
    if (rank < 1)
        throw std::invalid_argument("quant_error_bound: rank must be >= 1");
    if (!(bits >= 0.0))
        throw std::invalid_argument("quant_error_bound: bits must be >= 0");
    if (rank == 1)
        return 0.0;
    return std::exp2(-bits / static_cast<double>(rank - 1));
}

BetaChain beta_chain_check(arma::uword bits, arma::uword rank) {
    if (rank < 2)
        throw std::invalid_argument("beta_chain_check: rank must be >= 2");
    if (bits > 40)
        throw std::invalid_argument("beta_chain_check: bit count out of range");
    const double n = std::exp2(static_cast<double>(bits)); // codebook size
    const double b = static_cast<double>(rank) / static_cast<double>(rank - 1);

    BetaChain chain;
    // 2^B Beta(2^B, r/(r-1)) via log-gammas.
    chain.beta_form =
        std::exp(std::log(n) + std::lgamma(n) + std::lgamma(b) - std::lgamma(n + b));
    chain.bound = quant_error_bound(static_cast<double>(bits), rank);
    // The integrand concentrates in a boundary layer of width ~ n^(1/(1-r))
    // near s = 0 for large books; the quadrature tolerance is tied to the
    // closed form so the relative error stays meaningful at every size.
    const double exponent = static_cast<double>(rank - 1);
    const auto integrand = [n, exponent](double s) {
        const double sp = std::pow(s, exponent);
        if (sp >= 1.0)
            return 0.0;
        return std::exp(n * std::log1p(-sp));
    };
    const double tol = std::max(1e-16 * chain.beta_form, 1e-300);
    chain.integral = integrate_adaptive(integrand, 0.0, 1.0, tol);
    return chain;
}

double rate_gap_bound(const PowerCalibration &calibration, double bits, arma::uword rank) {
    if (calibration.num_users < 1)
        throw std::invalid_argument("rate_gap_bound: calibration has no users");
    const double k = static_cast<double>(calibration.num_users);
    const double interference = (calibration.gamma / k) * (k - 1.0) *
                                calibration.mean_norm_sq * quant_error_bound(bits, rank);
    return std::log2(1.0 + interference);
}

double required_bits(double snr_db, arma::uword num_users, arma::uword rank, double gap_base) {
    if (!(gap_base > 1.0))
        throw std::invalid_argument("required_bits: gap base must exceed 1");
    if (num_users < 2)
        throw std::invalid_argument("required_bits: need at least two users");
    if (rank < 1)
        throw std::invalid_argument("required_bits: rank must be >= 1");
    if (rank == 1)
        return 0.0; // a rank-one book carries the direction exactly
    const double rm1 = static_cast<double>(rank - 1);
    const double value =
        rm1 / 3.0 * snr_db +
        rm1 * std::log2((static_cast<double>(num_users) - 1.0) / (gap_base - 1.0));
    return std::max(0.0, value);
}

// ---------------------------------------------------------------------
// Empirical angle sampling
// ---------------------------------------------------------------------

std::vector<AngleSample> sample_ellipse_angles(const arma::vec &gamma_diag, std::size_t count,
                                               std::uint64_t seed) {
    if (count < 1)
        throw std::invalid_argument("sample_ellipse_angles: need at least one sample");
    arma::vec ev = gamma_diag(arma::find(gamma_diag > 0.0));
    if (ev.n_elem < gamma_diag.n_elem && gamma_diag.min() < 0.0)
        throw std::invalid_argument("sample_ellipse_angles: negative eigenvalue");
    const arma::uword r = ev.n_elem;
    if (r < 2)
        throw std::invalid_argument(
            "sample_ellipse_angles: need at least two positive eigenvalues");

    Rng rng(seed, stream_id(0, 0, Role::generic));
    std::vector<AngleSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; i++) {
        const arma::cx_vec g = rng.cnormal_vector(r);
        const arma::cx_vec w = rng.cnormal_vector(r);
        AngleSample s;
        // Isotropic: plain normalized inner product of the raw Gaussians.
        const double ng = arma::norm(g);
        const double nw = arma::norm(w);
        s.cos2_sphere = std::norm(arma::cdot(g, w)) / (ng * ng * nw * nw);
        // Hyper-ellipse: the same vectors scored after shaping by sigma,
        // i.e. the angle between R^{1/2} g and R^{1/2} w directions.
        std::complex<double> num(0.0, 0.0);
        double den_g = 0.0;
        double den_w = 0.0;
        for (arma::uword j = 0; j < r; j++) {
            num += ev[j] * std::conj(g[j]) * w[j];
            den_g += ev[j] * std::norm(g[j]);
            den_w += ev[j] * std::norm(w[j]);
        }
        s.cos2_ellipse = std::norm(num) / (den_g * den_w);
        out.push_back(s);
    }
    return out;
}

} // namespace mimofb
