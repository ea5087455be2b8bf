// SPDX-License-Identifier: Apache-2.0
//
// Closed-form quantization laws and rate-gap bounds.
//
// For a uniformly random unit codeword in C^r, the squared cosine z against
// any fixed direction has CDF 1 - (1-z)^(r-1).  The best of 2^B independent
// codewords therefore has CDF [1 - (1-z)^(r-1)]^(2^B), and the expected
// quantization error X = 1 - z of the winner telescopes through an exact
// beta-function identity to the familiar exponential bound:
//
//   E[X] = integral_0^1 (1 - s^(r-1))^(2^B) ds
//        = 2^B Beta(2^B, r/(r-1))  <=  2^(-B/(r-1)).
//
// beta_chain_check evaluates all three forms independently so tests can pin
// the whole chain numerically.  The rate-gap bound plugs E[X] into the
// interference factorization: with K equal-power users the mean per-user
// rate loss against perfect feedback is at most
//
//   log2(1 + (gamma/K)(K-1) E||h||^2 2^(-B/(r-1))),
//
// and inverting that at a target gap of log2(b) bits/s/Hz gives the
// feedback scaling law implemented by required_bits.
//
// The angle sampler backs the empirical side: paired squared cosines for
// the isotropic (sphere) law and for directions shaped by an eigenvalue
// profile (hyper-ellipse), drawn from common Gaussians so that dominance
// comparisons are low-variance.

#ifndef MIMOFB_BOUNDS_HPP
#define MIMOFB_BOUNDS_HPP

#include "mimofb/channel.hpp"

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

namespace mimofb {

// CDF of the squared cosine between a fixed direction and an independent
// uniform unit vector in C^dim, evaluated at z in [0, 1].
double sphere_cdf(double z, arma::uword dim);

// CDF of the best squared cosine across 2^bits independent codewords.
double max_z_cdf(double z, arma::uword dim, arma::uword bits);

// Upper bound on the expected quantization error, 2^(-bits/(rank-1)); a
// rank-one statistics codebook quantizes the direction exactly, so the
// bound is 0 there.  Fractional bit counts are allowed: analysis-side
// callers hand in unrounded bit budgets.
double quant_error_bound(double bits, arma::uword rank);

// The three links of the expectation chain, each computed independently:
// adaptive quadrature, the beta closed form, and the exponential bound.
struct BetaChain {
    double integral = 0.0;   // quadrature of (1 - s^(r-1))^(2^B)
    double beta_form = 0.0;  // 2^B Beta(2^B, r/(r-1))
    double bound = 0.0;      // 2^(-B/(r-1))
};
BetaChain beta_chain_check(arma::uword bits, arma::uword rank);

// Mean per-user rate gap bound at an operating point (see file header).
double rate_gap_bound(const PowerCalibration &calibration, double bits, arma::uword rank);

// Feedback bits needed to keep the per-user gap below log2(gap_base):
//   (rank-1)/3 * SNR_dB + (rank-1) log2((K-1)/(gap_base-1)),
// clamped below at zero.  Requires gap_base > 1 and num_users >= 2; a
// rank-one model needs no feedback at all.
double required_bits(double snr_db, arma::uword num_users, arma::uword rank, double gap_base);

// ---------------------------------------------------------------------
// Empirical angle sampling
// ---------------------------------------------------------------------

// One paired draw: the same pair of Gaussian vectors scored isotropically
// and after shaping by the eigenvalue profile.
struct AngleSample {
    double cos2_sphere = 0.0;  // |g^H w|^2 / (||g||^2 ||w||^2)
    double cos2_ellipse = 0.0; // same with sigma-weighted inner products
};

// Draws `count` angle pairs for the profile whose eigenvalues (sigma^2) are
// `gamma_diag`.  Zero eigenvalues are dropped first — they reduce the
// effective dimension — and at least two positive entries must remain.
std::vector<AngleSample> sample_ellipse_angles(const arma::vec &gamma_diag, std::size_t count,
                                               std::uint64_t seed);

// One bound-family verification record (assembled by the experiment
// driver, serialized by the I/O layer).
struct BoundReport {
    std::string family;     // which law was checked
    arma::uword rank = 0;   // r
    arma::uword bits = 0;   // B (0 where not applicable)
    std::string profile;    // eigenvalue profile label
    std::size_t samples = 0;
    double empirical = 0.0; // measured statistic
    double reference = 0.0; // closed-form value or acceptance threshold
    double margin = 0.0;    // signed slack, positive = healthy
    bool pass = false;
    std::string detail;     // human-readable one-liner
};

} // namespace mimofb

#endif // MIMOFB_BOUNDS_HPP
