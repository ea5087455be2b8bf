// SPDX-License-Identifier: Apache-2.0
//
// Spatially correlated downlink channel model.
//
// Each user's M-antenna channel is h = R^{1/2} h_w with h_w ~ CN(0, I_M) and
// R = U diag(sigma^2) U^H a rank-r transmit correlation matrix.  The
// eigenbasis U is drawn Haar-uniformly, the eigenvalue profile is a modeling
// choice, and traces are normalized so that E||h||^2 = trace(R) equals a
// configured target (the antenna count by default).  Keeping R in factored
// form makes R^{1/2} x an O(M r) operation and keeps the rank exact.

#ifndef MIMOFB_CHANNEL_HPP
#define MIMOFB_CHANNEL_HPP

#include "mimofb/rng.hpp"

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

namespace mimofb {

// ---------------------------------------------------------------------
// Eigenvalue profiles
// ---------------------------------------------------------------------

// How the r nonzero correlation eigenvalues are shaped before trace
// normalization.  `equal` spreads power uniformly, `exp_decay` decays by a
// fixed ratio per mode, `explicit_values` takes caller-provided weights.
struct EigenvalueProfile {
    enum class Kind { equal, exp_decay, explicit_values };

    Kind kind = Kind::equal;
    double decay = 0.5;         // per-mode ratio for exp_decay, in (0,1]
    std::vector<double> values; // unnormalized weights for explicit_values

    static EigenvalueProfile equal();
    static EigenvalueProfile exponential(double decay);
    static EigenvalueProfile explicit_list(std::vector<double> values);

    // Canonical short form used in config hashing and logs, e.g. "equal",
    // "exp:0.6", "explicit:4,1".
    std::string label() const;
};

// ---------------------------------------------------------------------
// Correlation model
// ---------------------------------------------------------------------

// Factored transmit correlation R = U diag(sigma^2) U^H.
//
// Invariants: `eigenbasis` is M x M unitary; `singular_values` holds the r
// positive entries sigma_i of Lambda^{1/2} in non-increasing order; their
// squares sum to `trace_target`.
struct CorrelationModel {
    arma::uword num_antennas = 0;  // M
    arma::uword rank = 0;          // r
    arma::cx_mat eigenbasis;       // U (all M columns; only the first r carry power)
    arma::vec singular_values;     // sigma, length r, descending
    EigenvalueProfile profile;     // provenance: how sigma was shaped
    std::uint64_t seed = 0;        // provenance: eigenbasis draw
    double trace_target = 0.0;     // sum of sigma_i^2

    // View of the r active eigenvectors.
    arma::cx_mat basis_span() const { return eigenbasis.head_cols(rank); }

    // Dense R and R^{1/2}; O(M^2 r), intended for tests and small problems.
    arma::cx_mat correlation() const;
    arma::cx_mat correlation_sqrt() const;

    // Applies R^{1/2} to a vector in O(M r).
    arma::cx_vec shape(const arma::cx_vec &x) const;
};

// Draws a correlation model.  The eigenbasis is the unitary factor of a QR
// decomposition of an M x M standard complex Gaussian matrix, with each
// column rescaled by the phase of the corresponding diagonal entry of the
// triangular factor; that phase fix makes the distribution exactly Haar.
//
// Throws std::invalid_argument for rank < 1, rank > M, non-positive trace
// target, or an invalid profile (non-positive weights, decay outside (0,1],
// explicit list whose length differs from rank).
CorrelationModel make_correlation(arma::uword num_antennas, arma::uword rank,
                                  const EigenvalueProfile &profile, std::uint64_t seed,
                                  double trace_target = -1.0); // -1 => num_antennas

// ---------------------------------------------------------------------
// Channel draws
// ---------------------------------------------------------------------

// One channel realization.  `direction` is h / ||h||; a zero-norm draw is
// impossible for rank >= 1 in finite precision, but the constructor guards
// it anyway.
struct ChannelSample {
    arma::cx_vec h;         // correlated channel, length M
    arma::cx_vec white;     // the underlying h_w that produced it
    arma::cx_vec direction; // h / ||h||
    double norm_sq = 0.0;   // ||h||^2
};

// Draws h = R^{1/2} h_w using the model's low-rank factors; consumes 2*M
// slots of `rng`.
ChannelSample draw_channel(const CorrelationModel &model, Rng &rng);

// ---------------------------------------------------------------------
// Power calibration
// ---------------------------------------------------------------------

// Relates the plotted operating point SNR_dB = 10 log10((gamma/K) E||h||^2)
// to the total transmit power gamma under unit noise variance and an equal
// K-way power split.
struct PowerCalibration {
    double snr_db = 0.0;
    double gamma = 0.0;        // total transmit power
    arma::uword num_users = 0; // K
    double mean_norm_sq = 0.0; // E||h||^2 = trace(R)
};

// Solves for gamma at the requested operating point: gamma = K * 10^(SNR/10)
// / E||h||^2.  Throws std::invalid_argument for num_users < 1.
PowerCalibration calibrate_power(double snr_db, arma::uword num_users,
                                 const CorrelationModel &model);

} // namespace mimofb

#endif // MIMOFB_CHANNEL_HPP
