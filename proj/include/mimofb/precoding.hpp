// SPDX-License-Identifier: Apache-2.0
//
// Zero-forcing precoding and per-user rate evaluation.
//
// The transmitter inverts the composite (possibly quantized) channel matrix
// and normalizes columns; each user then sees its own beam at power
// gamma/K plus residual interference from the other beams.  When feedback
// is quantized the interference a user suffers factorizes exactly as
//   |h^H v_i|^2 = ||h||^2 X |s^H v_i|^2,
// where X is the quantization error and s the unit residual direction of
// the channel relative to its selected codeword: the precoder nulls the
// codeword component perfectly, so only the residual leaks.
// lemma1_witness evaluates both sides of that identity for one user so
// tests and simulations can assert it sample by sample.

#ifndef MIMOFB_PRECODING_HPP
#define MIMOFB_PRECODING_HPP

#include "mimofb/channel.hpp"
#include "mimofb/codebook.hpp"

#include <armadillo>

namespace mimofb {

struct PrecodingMatrix {
    arma::cx_mat columns; // M x K, unit-norm beamforming vectors
    double rcond = 0.0;   // reciprocal condition estimate of the Gram matrix
};

// Zero-forcing beams: the normalized columns of H (H^H H)^{-1}, computed
// with a partial-pivoting linear solve rather than an explicit inverse.
//
// Throws std::invalid_argument if K > M, and singular_channel_error if the
// Gram matrix's reciprocal condition number falls below 1e-12 (condition
// number above 1e12): the beams would amplify noise without bound.
PrecodingMatrix zf_precoder(const arma::cx_mat &channels);

// Per-user SINRs and rates under equal power allocation gamma/K and unit
// noise variance:  SINR_k = (gamma/K)|h_k^H v_k|^2 / (1 + (gamma/K)
// sum_{i != k} |h_k^H v_i|^2),  rate_k = log2(1 + SINR_k).
struct RateReport {
    arma::vec sinr;        // per user
    arma::vec rates;       // bits/s/Hz per user
    double sum_rate = 0.0;
    double mean_rate = 0.0;
};

RateReport evaluate_rates(const arma::cx_mat &true_channels, const PrecodingMatrix &precoder,
                          const PowerCalibration &calibration);

// Both sides of the interference factorization for one user, evaluated
// against every other user's beam.
struct InterferenceWitness {
    arma::vec lhs;            // |h^H v_i|^2 for each interferer i
    arma::vec rhs;            // ||h||^2 X |s^H v_i|^2
    arma::vec projections;    // |s^H v_i|^2 (each must be <= 1)
    double max_abs_error = 0; // max_i |lhs_i - rhs_i|
    bool degenerate = false;  // X ~ 0: no residual direction, sides are ~0
};

InterferenceWitness lemma1_witness(const ChannelSample &sample,
                                   const QuantizationOutcome &outcome,
                                   const PrecodingMatrix &precoder, arma::uword user);

} // namespace mimofb

#endif // MIMOFB_PRECODING_HPP
