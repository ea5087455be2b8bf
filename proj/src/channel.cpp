// SPDX-License-Identifier: Apache-2.0

#include "mimofb/channel.hpp"

#include "mimofb/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mimofb {

// ---------------------------------------------------------------------
// EigenvalueProfile
// ---------------------------------------------------------------------

EigenvalueProfile EigenvalueProfile::equal() { return EigenvalueProfile{}; }

EigenvalueProfile EigenvalueProfile::exponential(double decay) {
    EigenvalueProfile p;
    p.kind = Kind::exp_decay;
    p.decay = decay;
    return p;
}

EigenvalueProfile EigenvalueProfile::explicit_list(std::vector<double> values) {
    EigenvalueProfile p;
    p.kind = Kind::explicit_values;
    p.values = std::move(values);
    return p;
}

std::string EigenvalueProfile::label() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::equal:
        os << "equal";
        break;
    case Kind::exp_decay:
        os << "exp:" << decay;
        break;
    case Kind::explicit_values:
        os << "explicit:";
        for (std::size_t i = 0; i < values.size(); i++)
            os << (i ? "," : "") << values[i];
        break;
    }
    return os.str();
}

// ---------------------------------------------------------------------
// CorrelationModel
// ---------------------------------------------------------------------

arma::cx_mat CorrelationModel::correlation() const {
    const arma::cx_mat ur = basis_span();
    return ur * arma::diagmat(arma::square(singular_values)) * ur.t();
}

arma::cx_mat CorrelationModel::correlation_sqrt() const {
    const arma::cx_mat ur = basis_span();
    return ur * arma::diagmat(singular_values) * ur.t();
}

arma::cx_vec CorrelationModel::shape(const arma::cx_vec &x) const {
    const arma::cx_mat ur = basis_span();
    // R^{1/2} x = U_r diag(sigma) U_r^H x, evaluated right to left.
    arma::cx_vec t = ur.t() * x;
    t %= arma::conv_to<arma::cx_vec>::from(singular_values);
    return ur * t;
}

namespace {

// Eigenvalue weights for the requested profile, before trace normalization.
arma::vec profile_weights(const EigenvalueProfile &profile, arma::uword rank) {
    switch (profile.kind) {
    case EigenvalueProfile::Kind::equal:
        return arma::vec(rank, arma::fill::ones);
    case EigenvalueProfile::Kind::exp_decay: {
        if (!(profile.decay > 0.0) || profile.decay > 1.0)
            throw std::invalid_argument("make_correlation: decay must lie in (0, 1]");
        arma::vec w(rank);
        double v = 1.0;
        for (arma::uword i = 0; i < rank; i++) {
            w[i] = v;
            v *= profile.decay;
        }
        return w;
    }
    case EigenvalueProfile::Kind::explicit_values: {
        if (profile.values.size() != rank)
            throw std::invalid_argument(
                "make_correlation: explicit profile length must equal the rank");
        arma::vec w(rank);
        for (arma::uword i = 0; i < rank; i++) {
            if (!(profile.values[i] > 0.0))
                throw std::invalid_argument(
                    "make_correlation: explicit eigenvalue weights must be positive");
            w[i] = profile.values[i];
        }
        return arma::sort(w, "descend");
    }
    }
    throw std::invalid_argument("make_correlation: unknown profile kind");
}

} // namespace

CorrelationModel make_correlation(arma::uword num_antennas, arma::uword rank,
                                  const EigenvalueProfile &profile, std::uint64_t seed,
                                  double trace_target) {
    if (num_antennas < 1)
        throw std::invalid_argument("make_correlation: need at least one antenna");
    if (rank < 1 || rank > num_antennas)
        throw std::invalid_argument("make_correlation: rank must lie in [1, M]");
    if (trace_target < 0.0)
        trace_target = static_cast<double>(num_antennas);
    if (!(trace_target > 0.0))
        throw std::invalid_argument("make_correlation: trace target must be positive");

    // Haar-uniform eigenbasis: QR of a square Ginibre matrix with the column
    // phases fixed from the diagonal of the triangular factor.
    Rng rng(seed, stream_id(0, 0, Role::correlation));
    arma::cx_mat g(num_antennas, num_antennas);
    for (arma::uword j = 0; j < num_antennas; j++)
        for (arma::uword i = 0; i < num_antennas; i++)
            g(i, j) = rng.next_cnormal();
    arma::cx_mat q;
    arma::cx_mat rmat;
    if (!arma::qr(q, rmat, g))
        throw numeric_error("make_correlation: QR decomposition failed");
    for (arma::uword j = 0; j < num_antennas; j++) {
        const std::complex<double> d = rmat(j, j);
        const double mag = std::abs(d);
        // The diagonal of R from a Ginibre draw vanishes with probability
        // zero; treat an exact zero as phase 1 to stay defined.
        const std::complex<double> phase = mag > 0.0 ? d / mag : std::complex<double>(1.0, 0.0);
        q.col(j) *= phase;
    }

    // Profile -> singular values with sum sigma_i^2 = trace_target.
    arma::vec w = profile_weights(profile, rank);
    w *= trace_target / arma::accu(w);

    CorrelationModel model;
    model.num_antennas = num_antennas;
    model.rank = rank;
    model.eigenbasis = std::move(q);
    model.singular_values = arma::sqrt(w);
    model.profile = profile;
    model.seed = seed;
    model.trace_target = trace_target;
    return model;
}

// ---------------------------------------------------------------------
// Channel draws and power calibration
// ---------------------------------------------------------------------

ChannelSample draw_channel(const CorrelationModel &model, Rng &rng) {
    ChannelSample s;
    s.white = rng.cnormal_vector(model.num_antennas);
    s.h = model.shape(s.white);
    const double nrm = arma::norm(s.h);
    s.norm_sq = nrm * nrm;
    if (!(s.norm_sq > 0.0))
        throw numeric_error("draw_channel: zero-norm channel realization");
    s.direction = s.h / std::sqrt(s.norm_sq);
    return s;
}

PowerCalibration calibrate_power(double snr_db, arma::uword num_users,
                                 const CorrelationModel &model) {
    if (num_users < 1)
        throw std::invalid_argument("calibrate_power: need at least one user");
    PowerCalibration cal;
    cal.snr_db = snr_db;
    cal.num_users = num_users;
    cal.mean_norm_sq = model.trace_target; // E||h||^2 = trace(R)
    cal.gamma = static_cast<double>(num_users) * std::pow(10.0, snr_db / 10.0) /
                cal.mean_norm_sq;
    return cal;
}

} // namespace mimofb
