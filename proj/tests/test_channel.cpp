// SPDX-License-Identifier: Apache-2.0
//
// Correlation model and channel draw tests: Haar eigenbasis law, trace
// normalization, low-rank factor consistency, power calibration.

#include "mimofb/channel.hpp"

#include "mimofb/stats.hpp"

#include <doctest.h>

#include <armadillo>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace mimofb;

TEST_CASE("profile labels are canonical") {
    CHECK(EigenvalueProfile::equal().label() == "equal");
    CHECK(EigenvalueProfile::exponential(0.6).label() == "exp:0.6");
    CHECK(EigenvalueProfile::explicit_list({4, 1}).label() == "explicit:4,1");
}

TEST_CASE("make_correlation validates its arguments") {
    const EigenvalueProfile equal = EigenvalueProfile::equal();
    CHECK_THROWS_AS(make_correlation(4, 0, equal, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_correlation(4, 5, equal, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_correlation(4, 2, EigenvalueProfile::exponential(0.0), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_correlation(4, 2, EigenvalueProfile::exponential(1.5), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_correlation(4, 2, EigenvalueProfile::explicit_list({1, 2, 3}), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_correlation(4, 2, EigenvalueProfile::explicit_list({1, -1}), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_correlation(4, 2, equal, 1, 0.0), std::invalid_argument);
}

TEST_CASE("eigenbasis is unitary and eigenvalues respect the profile") {
    const CorrelationModel m =
        make_correlation(8, 3, EigenvalueProfile::exponential(0.5), 11);
    CHECK(m.num_antennas == 8);
    CHECK(m.rank == 3);
    CHECK(arma::norm(m.eigenbasis.t() * m.eigenbasis - arma::eye<arma::cx_mat>(8, 8), "fro") <
          1e-12);
    // Squared singular values decay by the configured ratio and sum to M.
    const arma::vec w = arma::square(m.singular_values);
    CHECK(arma::sum(w) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(w(1) / w(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w(2) / w(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("explicit profile weights are normalized onto the trace target") {
    const CorrelationModel m =
        make_correlation(2, 2, EigenvalueProfile::explicit_list({4, 1}), 3);
    const arma::vec w = arma::square(m.singular_values);
    CHECK(w(0) == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(w(1) == doctest::Approx(0.4).epsilon(1e-14));

    const CorrelationModel scaled =
        make_correlation(2, 2, EigenvalueProfile::explicit_list({4, 1}), 3, 10.0);
    CHECK(arma::sum(arma::square(scaled.singular_values)) ==
          doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("dense correlation agrees with the factored form") {
    const CorrelationModel m =
        make_correlation(6, 2, EigenvalueProfile::exponential(0.7), 5);
    const arma::cx_mat r = m.correlation();
    const arma::cx_mat rs = m.correlation_sqrt();
    CHECK(arma::norm(rs * rs - r, "fro") < 1e-12);
    CHECK(arma::norm(r - r.t(), "fro") < 1e-12); // Hermitian
    CHECK(std::fabs(arma::trace(r).real() - 6.0) < 1e-12);
    CHECK(arma::rank(r, 1e-8) == 2);

    // shape() is R^{1/2} applied through the low-rank factors.
    Rng rng(9, stream_id(0, 0, Role::generic));
    const arma::cx_vec x = rng.cnormal_vector(6);
    CHECK(arma::norm(m.shape(x) - rs * x) < 1e-12);
}

TEST_CASE("eigenbasis draw is Haar: first-coordinate law") {
    // For a Haar column u in C^M, |u_1|^2 follows Beta(1, M-1) with CDF
    // 1-(1-z)^(M-1).  Each model draw gives one independent sample.
    const arma::uword m_dim = 8;
    std::vector<double> z;
    z.reserve(400);
    for (std::uint64_t seed = 0; seed < 400; seed++) {
        const CorrelationModel m =
            make_correlation(m_dim, 2, EigenvalueProfile::equal(), seed);
        z.push_back(std::norm(m.eigenbasis(0, 0)));
    }
    const KsResult ks = ks_test_cdf(z, [m_dim](double v) {
        return 1.0 - std::pow(1.0 - v, static_cast<double>(m_dim - 1));
    });
    CHECK(ks.p_value > 1e-3);
}

TEST_CASE("channel draws live in the correlation span with matching stats") {
    const CorrelationModel m =
        make_correlation(16, 3, EigenvalueProfile::exponential(0.6), 21);
    const arma::cx_mat span = m.basis_span();
    const arma::cx_mat offspan =
        arma::eye<arma::cx_mat>(16, 16) - span * span.t();
    const arma::cx_mat rs = m.correlation_sqrt();

    Rng rng(21, stream_id(0, 0, Role::channel));
    double sum_norm_sq = 0.0;
    const std::size_t n = 4000;
    for (std::size_t i = 0; i < n; i++) {
        const ChannelSample s = draw_channel(m, rng);
        sum_norm_sq += s.norm_sq;
        if (i < 32) {
            CHECK(arma::norm(s.h - rs * s.white) < 1e-12);
            CHECK(arma::norm(offspan * s.h) < 1e-10);
            CHECK(arma::norm(s.direction) == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(s.norm_sq ==
                  doctest::Approx(arma::dot(arma::abs(s.h), arma::abs(s.h))).epsilon(1e-12));
        }
    }
    // E||h||^2 = trace(R) = 16; the variance of ||h||^2 here is dominated by
    // the largest eigenvalue, so a generous 5-sigma band is used.
    const double mean = sum_norm_sq / static_cast<double>(n);
    CHECK(mean == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("channel draws are deterministic in (seed, stream)") {
    const CorrelationModel m = make_correlation(8, 2, EigenvalueProfile::equal(), 33);
    Rng a(33, stream_id(4, 1, Role::channel));
    Rng b(33, stream_id(4, 1, Role::channel));
    const ChannelSample sa = draw_channel(m, a);
    const ChannelSample sb = draw_channel(m, b);
    CHECK(arma::norm(sa.h - sb.h) == 0.0);

    Rng c(33, stream_id(4, 2, Role::channel));
    const ChannelSample sc = draw_channel(m, c);
    CHECK(arma::norm(sa.h - sc.h) > 1e-3);
}

TEST_CASE("power calibration solves the operating-point equation") {
    const CorrelationModel m = make_correlation(64, 4, EigenvalueProfile::equal(), 42);

    const PowerCalibration flat = calibrate_power(0.0, 10, m);
    CHECK(flat.gamma == doctest::Approx(10.0 / 64.0).epsilon(1e-14));

    const PowerCalibration six = calibrate_power(6.0, 10, m);
    CHECK(six.gamma == doctest::Approx(0.6220424539898394).epsilon(1e-13));
    CHECK(six.mean_norm_sq == doctest::Approx(64.0).epsilon(1e-14));

    // Round trip: SNR = 10 log10((gamma/K) E||h||^2).
    const double snr =
        10.0 * std::log10(six.gamma / 10.0 * six.mean_norm_sq);
    CHECK(snr == doctest::Approx(6.0).epsilon(1e-12));

    CHECK_THROWS_AS(calibrate_power(0.0, 0, m), std::invalid_argument);
}
