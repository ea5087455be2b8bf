// SPDX-License-Identifier: Apache-2.0

#include "mimofb/precoding.hpp"

#include "mimofb/errors.hpp"
#include "mimofb/stats.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mimofb {

PrecodingMatrix zf_precoder(const arma::cx_mat &channels) {
    const arma::uword m = channels.n_rows;
    const arma::uword k = channels.n_cols;
    if (k < 1)
        throw std::invalid_argument("zf_precoder: no users");
    if (k > m)
        throw std::invalid_argument("zf_precoder: more users than antennas");

    const arma::cx_mat gram = channels.t() * channels; // K x K Hermitian
    const double rc = arma::rcond(gram);
    if (!(rc > 1e-12)) {
        std::ostringstream os;
        os << "zf_precoder: channel matrix is numerically rank deficient "
           << "(reciprocal condition " << rc << ")";
        throw singular_channel_error(os.str(), rc);
    }
    // H (H^H H)^{-1} via a partial-pivoting solve of gram * X = H^H, then
    // X^H; no explicit inverse is ever formed.
    arma::cx_mat x;
    if (!arma::solve(x, gram, channels.t(), arma::solve_opts::no_approx))
        throw singular_channel_error("zf_precoder: linear solve failed", rc);

    PrecodingMatrix p;
    p.rcond = rc;
    p.columns = x.t();
    for (arma::uword j = 0; j < k; j++) {
        const double nrm = arma::norm(p.columns.col(j));
        if (!(nrm > 0.0))
            throw singular_channel_error("zf_precoder: zero-norm beam", rc);
        p.columns.col(j) /= nrm;
    }
    return p;
}

RateReport evaluate_rates(const arma::cx_mat &true_channels, const PrecodingMatrix &precoder,
                          const PowerCalibration &calibration) {
    const arma::uword k = true_channels.n_cols;
    if (precoder.columns.n_cols != k || precoder.columns.n_rows != true_channels.n_rows)
        throw std::invalid_argument("evaluate_rates: channel/precoder shape mismatch");
    if (calibration.num_users != k)
        throw std::invalid_argument("evaluate_rates: calibration is for a different user count");

    const double per_user_power = calibration.gamma / static_cast<double>(k);
    // All |h_k^H v_i|^2 at once.
    const arma::mat gains = arma::square(arma::abs(true_channels.t() * precoder.columns));

    RateReport report;
    report.sinr.set_size(k);
    report.rates.set_size(k);
    for (arma::uword u = 0; u < k; u++) {
        const double signal = per_user_power * gains(u, u);
        const double interference =
            per_user_power * (arma::accu(gains.row(u)) - gains(u, u));
        report.sinr[u] = signal / (1.0 + interference);
        report.rates[u] = std::log2(1.0 + report.sinr[u]);
    }
    report.sum_rate = pairwise_sum(report.rates.memptr(), k);
    report.mean_rate = report.sum_rate / static_cast<double>(k);
    return report;
}

InterferenceWitness lemma1_witness(const ChannelSample &sample,
                                   const QuantizationOutcome &outcome,
                                   const PrecodingMatrix &precoder, arma::uword user) {
    const arma::uword k = precoder.columns.n_cols;
    if (user >= k)
        throw std::invalid_argument("lemma1_witness: user index out of range");
    if (precoder.columns.n_rows != sample.h.n_elem)
        throw std::invalid_argument("lemma1_witness: sample/precoder dimension mismatch");

    InterferenceWitness w;
    w.lhs.set_size(k > 0 ? k - 1 : 0);
    w.rhs.set_size(w.lhs.n_elem);
    w.projections.set_size(w.lhs.n_elem);

    const std::optional<DirectionDecomposition> split = decompose(sample, outcome);
    w.degenerate = !split.has_value();

    arma::uword out = 0;
    for (arma::uword i = 0; i < k; i++) {
        if (i == user)
            continue;
        const arma::cx_vec beam = precoder.columns.col(i);
        const double lhs = std::norm(arma::cdot(sample.h, beam));
        double rhs = 0.0;
        double proj = 0.0;
        if (!w.degenerate) {
            proj = std::norm(arma::cdot(split->residual, beam));
            rhs = sample.norm_sq * split->quant_error * proj;
        }
        w.lhs[out] = lhs;
        w.rhs[out] = rhs;
        w.projections[out] = proj;
        w.max_abs_error = std::max(w.max_abs_error, std::fabs(lhs - rhs));
        out++;
    }
    return w;
}

} // namespace mimofb
