// SPDX-License-Identifier: Apache-2.0
//
// Experiment-driver tests: bit rules, trial determinism, worker invariance,
// scheme ordering, the condition guard, the minimum-feedback search, and the
// bound-verification suite.

#include "mimofb/experiments.hpp"

#include <doctest.h>

#include <armadillo>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

using namespace mimofb;

namespace {

const PointRecord &find_row(const SweepResult &result, double snr_db,
                            const std::string &scheme) {
    for (const PointRecord &rec : result.records) {
        if (rec.snr_db == snr_db && rec.scheme == scheme)
            return rec;
    }
    REQUIRE_MESSAGE(false, "row not found: snr=", snr_db, " scheme=", scheme);
    static PointRecord unreachable;
    return unreachable;
}

} // namespace

TEST_CASE("scheme labels round-trip") {
    for (const Scheme s :
         {Scheme::ideal, Scheme::statistics, Scheme::rvq, Scheme::eigen_baseline}) {
        CHECK(scheme_from_label(scheme_label(s)) == s);
    }
    CHECK(scheme_label(Scheme::eigen_baseline) == "eigen");
    CHECK_THROWS_AS(scheme_from_label("zf"), std::invalid_argument);
}

TEST_CASE("resolve_bits applies the scaling rule with a ceil and a floor") {
    const BitBudget a = resolve_bits(BitRule::scaled(3.17), 6.0, 4);
    CHECK(a.unrounded == doctest::Approx(9.17).epsilon(1e-12));
    CHECK(a.bits == 10);

    const BitBudget b = resolve_bits(BitRule::scaled(3.17), 0.0, 4);
    CHECK(b.unrounded == doctest::Approx(3.17).epsilon(1e-12));
    CHECK(b.bits == 4);

    // Negative rule output clamps to zero bits but keeps the raw value.
    const BitBudget c = resolve_bits(BitRule::scaled(-10.0), 0.0, 4);
    CHECK(c.unrounded == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(c.bits == 0);

    // Rank one zeroes the slope; fixed rules pass through.
    const BitBudget d = resolve_bits(BitRule::scaled(3.17), 18.0, 1);
    CHECK(d.unrounded == doctest::Approx(3.17).epsilon(1e-12));

    const BitBudget e = resolve_bits(BitRule::fixed(7), 12.0, 4);
    CHECK(e.bits == 7);
    CHECK(e.unrounded == 7.0);
}

TEST_CASE("run_trial is deterministic and schemes do not perturb each other") {
    ExperimentConfig cfg;
    cfg.num_antennas = 8;
    cfg.num_users = 3;
    cfg.rank = 2;
    cfg.profile = EigenvalueProfile::equal();
    cfg.trials = 4;
    cfg.seed = 5;
    cfg.schemes = {Scheme::ideal, Scheme::statistics, Scheme::rvq};

    const TrialResult once = run_trial(cfg, 6.0, 2);
    const TrialResult twice = run_trial(cfg, 6.0, 2);
    REQUIRE(once.mean_rate.size() == 3);
    for (std::size_t i = 0; i < once.mean_rate.size(); i++) {
        CHECK(once.mean_rate[i] == twice.mean_rate[i]);
        CHECK(once.discarded[i] == twice.discarded[i]);
    }
    CHECK(std::isnan(once.mean_quant_error[0])); // ideal quantizes nothing
    CHECK(once.mean_rate[0] > once.mean_rate[1]); // ideal beats quantized

    // Dropping a scheme leaves the others' draws untouched.
    ExperimentConfig fewer = cfg;
    fewer.schemes = {Scheme::ideal, Scheme::rvq};
    const TrialResult reduced = run_trial(fewer, 6.0, 2);
    CHECK(reduced.mean_rate[0] == once.mean_rate[0]);
    CHECK(reduced.mean_rate[1] == once.mean_rate[2]);

    // A different trial index produces different draws.
    const TrialResult other = run_trial(cfg, 6.0, 3);
    CHECK(other.mean_rate[0] != once.mean_rate[0]);
}

TEST_CASE("rate curve is bit-identical across worker counts") {
    ExperimentConfig cfg;
    cfg.num_antennas = 8;
    cfg.num_users = 3;
    cfg.rank = 2;
    cfg.snr_grid_db = {0.0, 6.0};
    cfg.trials = 30;
    cfg.seed = 11;

    ExperimentConfig one = cfg;
    one.workers = 1;
    ExperimentConfig three = cfg;
    three.workers = 3;
    const SweepResult a = run_rate_curve(one);
    const SweepResult b = run_rate_curve(three);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); i++) {
        CHECK(a.records[i].scheme == b.records[i].scheme);
        CHECK(a.records[i].snr_db == b.records[i].snr_db);
        CHECK(a.records[i].mean_rate == b.records[i].mean_rate); // bitwise
        CHECK(a.records[i].rate_stderr == b.records[i].rate_stderr);
        CHECK(a.records[i].discarded == b.records[i].discarded);
    }
}

TEST_CASE("rate curve rows carry budgets, gaps, and sane ordering") {
    ExperimentConfig cfg;
    cfg.num_antennas = 16;
    cfg.num_users = 4;
    cfg.rank = 3;
    cfg.profile = EigenvalueProfile::exponential(0.6);
    cfg.snr_grid_db = {10.0};
    cfg.trials = 150;
    cfg.seed = 21;

    const SweepResult result = run_rate_curve(cfg);
    CHECK(result.kind == "rate-curve");
    REQUIRE(result.records.size() == 4);

    const PointRecord &ideal = find_row(result, 10.0, "ideal");
    const PointRecord &stats = find_row(result, 10.0, "statistics");
    const PointRecord &rvq = find_row(result, 10.0, "rvq");
    const PointRecord &eigen = find_row(result, 10.0, "eigen");

    CHECK(ideal.bits == 0.0);
    CHECK(std::isnan(ideal.mean_quant_error));
    CHECK(ideal.gap_vs_ideal == 0.0);
    CHECK(ideal.gap_bound == 0.0);
    CHECK(ideal.valid_trials == 150);

    // scaled rule at SNR 10, rank 3: (2/3)*10 + 3.17 = 9.8366..., ceil = 10.
    CHECK(stats.bits == 10.0);
    CHECK(stats.bits_unrounded == doctest::Approx(10.0 * 2.0 / 3.0 + 3.17).epsilon(1e-12));
    CHECK(eigen.bits == 0.0);

    // Quantized schemes lose rate; shaping beats isotropic codebooks and a
    // 10-bit book beats the zero-bit eigen baseline.
    CHECK(ideal.mean_rate > stats.mean_rate);
    CHECK(stats.mean_rate > rvq.mean_rate);
    CHECK(stats.mean_rate > eigen.mean_rate);
    CHECK(stats.gap_vs_ideal == doctest::Approx(ideal.mean_rate - stats.mean_rate)
                                    .epsilon(1e-12));
    CHECK(stats.gap_bound > 0.0);
    CHECK(stats.mean_quant_error > 0.0);
    CHECK(stats.mean_quant_error < rvq.mean_quant_error);
}

TEST_CASE("statistics quantization error respects the closed-form bound") {
    ExperimentConfig cfg;
    cfg.num_antennas = 16;
    cfg.num_users = 4;
    cfg.rank = 3;
    cfg.profile = EigenvalueProfile::equal();
    cfg.snr_grid_db = {6.0};
    cfg.schemes = {Scheme::ideal, Scheme::statistics};
    cfg.bit_rule = BitRule::fixed(6);
    cfg.trials = 200;
    cfg.seed = 33;

    const SweepResult result = run_rate_curve(cfg);
    const PointRecord &stats = find_row(result, 6.0, "statistics");
    CHECK(stats.mean_quant_error <= quant_error_bound(6, 3) + 0.02);
    CHECK(stats.mean_quant_error > 0.0);
}

TEST_CASE("zero-bit statistics books still run") {
    ExperimentConfig cfg;
    cfg.num_antennas = 8;
    cfg.num_users = 2;
    cfg.rank = 2;
    cfg.snr_grid_db = {6.0};
    cfg.schemes = {Scheme::ideal, Scheme::statistics};
    cfg.bit_rule = BitRule::fixed(0);
    cfg.trials = 40;
    cfg.seed = 9;

    const SweepResult result = run_rate_curve(cfg);
    const PointRecord &stats = find_row(result, 6.0, "statistics");
    const PointRecord &ideal = find_row(result, 6.0, "ideal");
    CHECK(stats.bits == 0.0);
    CHECK(stats.mean_rate > 0.0);
    CHECK(stats.mean_rate < ideal.mean_rate * 1.05);
}

TEST_CASE("condition guard discards singular composites and reports NaN") {
    // With a shared correlation model the eigen baseline feeds back the same
    // eigenvector for every user: the composite is singular in every trial.
    ExperimentConfig cfg;
    cfg.num_antennas = 8;
    cfg.num_users = 2;
    cfg.rank = 2;
    cfg.shared_correlation = true;
    cfg.snr_grid_db = {6.0};
    cfg.schemes = {Scheme::ideal, Scheme::eigen_baseline};
    cfg.trials = 10;
    cfg.seed = 3;

    const SweepResult result = run_rate_curve(cfg);
    const PointRecord &eigen = find_row(result, 6.0, "eigen");
    CHECK(eigen.discarded == 10);
    CHECK(eigen.valid_trials == 0);
    CHECK(std::isnan(eigen.mean_rate));
    const PointRecord &ideal = find_row(result, 6.0, "ideal");
    CHECK(ideal.discarded == 0);
    CHECK(ideal.valid_trials == 10);
}

TEST_CASE("factorization witness stays at rounding level through the sweep") {
    ExperimentConfig cfg;
    cfg.num_antennas = 8;
    cfg.num_users = 3;
    cfg.rank = 2;
    cfg.profile = EigenvalueProfile::exponential(0.7);
    cfg.snr_grid_db = {6.0};
    cfg.trials = 50;
    cfg.seed = 17;
    cfg.check_identity = true;

    const SweepResult result = run_rate_curve(cfg);
    CHECK(result.max_witness_error > 0.0);
    CHECK(result.max_witness_error <= 1e-9);
}

TEST_CASE("find_required_bits walks up to the target and honors the formula") {
    ExperimentConfig cfg;
    cfg.num_antennas = 16;
    cfg.num_users = 4;
    cfg.snr_grid_db = {6.0};
    cfg.trials = 120;
    cfg.seed = 29;

    const SweepResult result = find_required_bits(cfg, {1, 2}, 3.0);
    CHECK(result.kind == "required-bits");
    REQUIRE(result.required_bits.size() == 2);

    const RequiredBitsRecord &r1 = result.required_bits[0];
    CHECK(r1.rank == 1);
    CHECK(r1.reachable);
    CHECK(r1.bits == 0); // a rank-one direction needs no feedback
    CHECK(r1.formula_bits == 0.0);

    const RequiredBitsRecord &r2 = result.required_bits[1];
    CHECK(r2.rank == 2);
    CHECK(r2.reachable);
    CHECK(r2.bits <= 10);
    CHECK(r2.measured_gap <= 3.0);

    // Each searched rank also leaves its per-B rows in `records`.
    CHECK_FALSE(result.records.empty());
}

TEST_CASE("find_required_bits validates its inputs") {
    ExperimentConfig cfg;
    cfg.num_antennas = 8;
    cfg.num_users = 2;
    cfg.trials = 5;

    ExperimentConfig two_points = cfg;
    two_points.snr_grid_db = {0.0, 6.0};
    CHECK_THROWS_AS(find_required_bits(two_points, {2}, 1.0), std::invalid_argument);

    ExperimentConfig one_point = cfg;
    one_point.snr_grid_db = {6.0};
    CHECK_THROWS_AS(find_required_bits(one_point, {2}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(find_required_bits(one_point, {}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(find_required_bits(one_point, {9}, 1.0), std::invalid_argument);

    ExperimentConfig explicit_profile = one_point;
    explicit_profile.profile = EigenvalueProfile::explicit_list({3.0, 1.0});
    explicit_profile.rank = 2;
    CHECK_THROWS_AS(find_required_bits(explicit_profile, {2}, 1.0), std::invalid_argument);
}

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg;
    cfg.num_antennas = 4;
    cfg.num_users = 5; // K > M
    CHECK_THROWS_AS(run_rate_curve(cfg), std::invalid_argument);

    ExperimentConfig no_trials;
    no_trials.num_antennas = 8;
    no_trials.num_users = 2;
    no_trials.trials = 0;
    CHECK_THROWS_AS(run_rate_curve(no_trials), std::invalid_argument);

    ExperimentConfig no_snr;
    no_snr.num_antennas = 8;
    no_snr.num_users = 2;
    no_snr.snr_grid_db = {};
    CHECK_THROWS_AS(run_rate_curve(no_snr), std::invalid_argument);

    ExperimentConfig bad_rank;
    bad_rank.num_antennas = 8;
    bad_rank.num_users = 2;
    bad_rank.rank = 9;
    CHECK_THROWS_AS(run_rate_curve(bad_rank), std::invalid_argument);
}

TEST_CASE("bound suite: default lattice passes and is reproducible") {
    const std::vector<BoundReport> reports = run_bound_suite(42);
    REQUIRE_FALSE(reports.empty());
    for (const BoundReport &r : reports) {
        CAPTURE(r.family);
        CAPTURE(r.detail);
        CHECK(r.pass);
        CHECK_FALSE(r.family.empty());
        // beta-chain rows are analytic identities; every other family is
        // sampled.
        if (r.family == "beta-chain")
            CHECK(r.samples == 0);
        else
            CHECK(r.samples > 0);
    }
    const std::vector<BoundReport> again = run_bound_suite(42);
    REQUIRE(again.size() == reports.size());
    for (std::size_t i = 0; i < reports.size(); i++) {
        CHECK(again[i].family == reports[i].family);
        CHECK(again[i].empirical == reports[i].empirical);
        CHECK(again[i].margin == reports[i].margin);
    }
    // The slack is sized so seed variation never flips a verdict.
    const std::vector<BoundReport> other = run_bound_suite(1);
    REQUIRE(other.size() == reports.size());
    for (std::size_t i = 0; i < reports.size(); i++) {
        CAPTURE(other[i].family);
        CAPTURE(other[i].detail);
        CHECK(other[i].pass == reports[i].pass);
    }
}

TEST_CASE("bound suite: custom and empty lattices") {
    const std::vector<std::pair<arma::uword, arma::uword>> lattice = {{2, 4}, {5, 6}};
    const std::vector<BoundReport> reports = run_bound_suite(7, lattice);
    REQUIRE_FALSE(reports.empty());
    bool saw_rank5 = false;
    for (const BoundReport &r : reports) {
        CHECK(r.pass);
        if (r.rank == 5)
            saw_rank5 = true;
    }
    CHECK(saw_rank5);

    CHECK(run_bound_suite(7, {}).empty());
    CHECK_THROWS_AS(run_bound_suite(7, {{1, 4}}), std::invalid_argument);
}
