// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks: ten end-to-end criteria covering the simulator, the
// closed-form laws, and the CLI.  Each prints one [PASS]/[FAIL] line; the
// process exits nonzero if any fail.  argv[1] must be the path to the
// command-line binary (used by the determinism criterion).
//
// These run the full desk-scale operating point (the library defaults), so
// the whole binary takes a few minutes; progress goes to stderr.

#include "mimofb/bounds.hpp"
#include "mimofb/channel.hpp"
#include "mimofb/codebook.hpp"
#include "mimofb/errors.hpp"
#include "mimofb/experiments.hpp"
#include "mimofb/io.hpp"
#include "mimofb/kernels.hpp"
#include "mimofb/precoding.hpp"
#include "mimofb/stats.hpp"

#include <algorithm>
#include <armadillo>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using namespace mimofb;

namespace {

bool g_all_pass = true;

void report(int index, bool pass, const std::string &label, const std::string &detail) {
    std::printf("[%s] %2d %s%s%s\n", pass ? "PASS" : "FAIL", index, label.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    g_all_pass = g_all_pass && pass;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

double ecdf_at(const std::vector<double> &sorted, double z) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), z);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

std::string read_file(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

// ---------------------------------------------------------------------
// 1+2: the default rate sweep: flat bounded statistics gap, growing rvq gap
// ---------------------------------------------------------------------

void criteria_rate_sweep() {
    std::fprintf(stderr, "acceptance: running the default rate sweep "
                         "(M=64, K=10, r=4, 500 trials x 7 SNR points)...\n");
    const ExperimentConfig cfg; // library defaults are the acceptance point
    const SweepResult sweep = run_rate_curve(cfg);

    std::map<double, double> stat_gap;
    std::map<double, double> rvq_gap;
    bool rows_ok = true;
    for (const PointRecord &r : sweep.records) {
        if (r.scheme == "statistics") {
            stat_gap[r.snr_db] = r.gap_vs_ideal;
            rows_ok = rows_ok && r.valid_trials == cfg.trials;
        } else if (r.scheme == "rvq") {
            rvq_gap[r.snr_db] = r.gap_vs_ideal;
        }
    }

    bool c1 = rows_ok && stat_gap.size() == cfg.snr_grid_db.size();
    double lo = 1e300;
    double hi = -1e300;
    for (const auto &[snr, gap] : stat_gap) {
        lo = std::min(lo, gap);
        hi = std::max(hi, gap);
        c1 = c1 && std::isfinite(gap) && gap <= 2.42;
    }
    c1 = c1 && (hi - lo) <= 0.5;
    report(1, c1, "scaled-bits statistics gap is flat and bounded on the default sweep",
           "gap range [" + num(lo) + ", " + num(hi) + "] bits/s/Hz, spread " +
               num(hi - lo) + " (<= 0.5), ceiling 2.42");

    const bool c2 = rvq_gap.count(3.0) == 1 && rvq_gap.count(18.0) == 1 &&
                    rvq_gap[18.0] > rvq_gap[3.0];
    report(2, c2, "isotropic books provisioned for the subspace degrade with SNR",
           "rvq gap " + num(rvq_gap.count(3.0) ? rvq_gap[3.0] : -1.0) + " at 3 dB vs " +
               num(rvq_gap.count(18.0) ? rvq_gap[18.0] : -1.0) + " at 18 dB");
}

// ---------------------------------------------------------------------
// 3: mean quantization error under the closed-form bound on an (r, B) grid
// ---------------------------------------------------------------------

void criterion_error_bound_grid() {
    std::fprintf(stderr, "acceptance: quantization-error grid...\n");
    bool ok = true;
    double worst = -1e300;
    std::string worst_cell = "-";
    const std::size_t trials = 10000;
    std::vector<double> x(trials);
    for (const arma::uword r : {2u, 3u, 4u}) {
        for (const arma::uword b : {2u, 4u, 6u, 8u, 10u}) {
            for (std::size_t t = 0; t < trials; t++) {
                const double z =
                    kernels::scan_isotropic_serial(
                        777, stream_id(t, static_cast<std::uint32_t>(r * 16 + b),
                                       Role::stats_scan),
                        std::uint64_t{1} << b, r)
                        .z;
                x[t] = std::max(0.0, 1.0 - z);
            }
            const MeanSummary s = summarize_mean(x);
            const double bound = quant_error_bound(static_cast<double>(b), r);
            const double margin = s.mean - (bound + 3.0 * s.standard_error);
            ok = ok && margin <= 0.0;
            if (margin > worst) {
                worst = margin;
                worst_cell = "r=" + std::to_string(r) + ",B=" + std::to_string(b);
            }
        }
    }
    report(3, ok, "mean quantization error stays under 2^(-B/(r-1)) on the grid",
           "worst margin " + num(worst) + " at " + worst_cell +
               " (mean - bound - 3*stderr, 10000 trials/cell)");
}

// ---------------------------------------------------------------------
// 4: isotropic squared-cosine law
// ---------------------------------------------------------------------

void criterion_sphere_law() {
    std::fprintf(stderr, "acceptance: isotropic angle law...\n");
    const auto pairs = sample_ellipse_angles(arma::ones(4), 100000, 4242);
    std::vector<double> z;
    z.reserve(pairs.size());
    for (const AngleSample &p : pairs)
        z.push_back(p.cos2_sphere);
    const KsResult ks = ks_test_cdf(z, [](double v) { return sphere_cdf(v, 4); });
    report(4, ks.statistic < 0.006, "isotropic squared cosine follows 1-(1-z)^(r-1)",
           "KS statistic " + num(ks.statistic) + " over 100000 draws (< 0.006)");
}

// ---------------------------------------------------------------------
// 5: shaped quantization dominates isotropic, and collapses ranks cleanly
// ---------------------------------------------------------------------

void criterion_ellipse_dominance() {
    std::fprintf(stderr, "acceptance: shaped-vs-isotropic dominance...\n");
    const std::size_t n = 100000;
    const double slack = 3.0 / std::sqrt(static_cast<double>(n));
    const arma::uword rank_cycle[4] = {2, 3, 4, 6};
    Rng wrng(5151, stream_id(0, 0, Role::generic));
    bool ok = true;
    double worst = -1e300;
    for (int trial = 0; trial < 20; trial++) {
        const arma::uword r = rank_cycle[trial % 4];
        arma::vec gd(r);
        for (arma::uword j = 0; j < r; j++)
            gd(j) = 0.25 + 3.75 * wrng.next_unit();
        const auto pairs = sample_ellipse_angles(gd, n, 6000 + trial);
        std::vector<double> ez;
        ez.reserve(n);
        for (const AngleSample &p : pairs)
            ez.push_back(p.cos2_ellipse);
        std::sort(ez.begin(), ez.end());
        for (int i = 1; i <= 19; i++) {
            const double z = 0.05 * i;
            const double margin = ecdf_at(ez, z) - (sphere_cdf(z, r) + slack);
            ok = ok && margin <= 0.0;
            worst = std::max(worst, margin);
        }
    }

    // A vanishing eigenvalue must reduce the law to the lower rank.
    const auto pairs = sample_ellipse_angles(arma::vec{1.0, 1.0, 1.0, 1e-6}, n, 6100);
    std::vector<double> ez;
    ez.reserve(n);
    for (const AngleSample &p : pairs)
        ez.push_back(p.cos2_ellipse);
    const KsResult ks = ks_test_cdf(ez, [](double v) { return sphere_cdf(v, 3); });
    ok = ok && ks.statistic < 0.02;

    report(5, ok, "shaped squared cosine dominates the isotropic law pointwise",
           "worst ECDF margin " + num(worst) + " over 20 random profiles; "
           "vanishing-mode KS " + num(ks.statistic) + " vs the rank-3 law (< 0.02)");
}

// ---------------------------------------------------------------------
// 6: expectation chain across the full (B, r) lattice
// ---------------------------------------------------------------------

void criterion_beta_chain() {
    std::fprintf(stderr, "acceptance: expectation chain lattice...\n");
    bool ok = true;
    double worst_gap = 0.0;
    for (arma::uword b = 0; b <= 20; b++) {
        for (arma::uword r = 2; r <= 8; r++) {
            const BetaChain c = beta_chain_check(b, r);
            const double gap = std::fabs(c.integral - c.beta_form);
            worst_gap = std::max(worst_gap, gap);
            ok = ok && gap < 1e-8 && c.beta_form <= c.bound * (1.0 + 1e-12);
        }
    }
    report(6, ok, "quadrature, beta closed form, and exponential bound agree on the lattice",
           "147 cells, worst |integral - closed form| = " + num(worst_gap) + " (< 1e-8)");
}

// ---------------------------------------------------------------------
// 7: interference factorization witness through the materialized pipeline
// ---------------------------------------------------------------------

void criterion_witness() {
    std::fprintf(stderr, "acceptance: factorization witness (10000 pipeline draws)...\n");
    const arma::uword m = 32;
    const arma::uword k = 6;
    const std::size_t trials = 10000;

    std::vector<std::shared_ptr<const CorrelationModel>> models;
    std::vector<Codebook> books;
    for (arma::uword u = 0; u < k; u++) {
        models.push_back(std::make_shared<const CorrelationModel>(
            make_correlation(m, 4, EigenvalueProfile::exponential(0.7), 100 + u)));
        books.push_back(build_statistics(models[u], 8, 300 + u));
    }

    double max_err = 0.0;
    std::size_t valid = 0;
    bool ok = true;
    std::vector<ChannelSample> samples(k);
    std::vector<QuantizationOutcome> outcomes(k);
    for (std::size_t t = 0; t < trials; t++) {
        arma::cx_mat fed(m, k);
        for (arma::uword u = 0; u < k; u++) {
            Rng rng(911, stream_id(t, static_cast<std::uint32_t>(u), Role::channel));
            samples[u] = draw_channel(*models[u], rng);
            outcomes[u] = quantize(samples[u], books[u]);
            fed.col(u) = outcomes[u].feedback;
        }
        PrecodingMatrix p;
        try {
            p = zf_precoder(fed);
        } catch (const singular_channel_error &) {
            continue; // counted via `valid`
        }
        valid++;
        for (arma::uword u = 0; u < k; u++) {
            const InterferenceWitness w = lemma1_witness(samples[u], outcomes[u], p, u);
            max_err = std::max(max_err, w.max_abs_error);
            const double cap = samples[u].norm_sq * outcomes[u].quant_error + 1e-9;
            for (arma::uword i = 0; i < w.lhs.n_elem; i++) {
                ok = ok && w.projections(i) <= 1.0 + 1e-12;
                ok = ok && w.lhs(i) <= cap;
            }
        }
    }
    ok = ok && max_err <= 1e-9 && valid >= trials - 10;
    report(7, ok, "leakage factorizes as ||h||^2 X |s^H v|^2 through the full pipeline",
           "max |lhs - rhs| = " + num(max_err) + " over " + std::to_string(valid) +
               " draws (<= 1e-9), every interferer under its ||h||^2 X cap");
}

// ---------------------------------------------------------------------
// 8: minimum-feedback search grows linearly with rank
// ---------------------------------------------------------------------

void criterion_required_bits_search() {
    std::fprintf(stderr, "acceptance: minimum-feedback search over ranks...\n");
    ExperimentConfig cfg;
    cfg.snr_grid_db = {6.0};
    cfg.trials = 400;
    const SweepResult sweep = find_required_bits(cfg, {2, 3, 4}, 0.5);

    bool ok = sweep.required_bits.size() == 3;
    std::vector<double> xs;
    std::vector<double> ys;
    std::string found = "B =";
    for (const RequiredBitsRecord &r : sweep.required_bits) {
        ok = ok && r.reachable;
        xs.push_back(static_cast<double>(r.rank));
        ys.push_back(static_cast<double>(r.bits));
        found += " " + std::to_string(r.bits);
    }
    double r2 = 0.0;
    if (ok) {
        const LinearFit fit = fit_line(xs, ys);
        r2 = fit.r_squared;
        ok = ok && r2 >= 0.9 && ys.size() == 3 && ys[0] <= ys[1] && ys[1] <= ys[2];
    }
    report(8, ok, "bits meeting a 0.5 bits/s/Hz gap grow linearly in rank",
           found + " for r = 2, 3, 4; linear fit R^2 = " + num(r2) + " (>= 0.9)");
}

// ---------------------------------------------------------------------
// 9: pinned closed-form feedback requirement
// ---------------------------------------------------------------------

void criterion_formula_pin() {
    const double got = required_bits(6.0, 10, 4, std::exp2(0.09));
    const bool ok = std::fabs(got - 27.382165899397298) < 1e-9;
    report(9, ok, "closed-form bit requirement reproduces the pinned value",
           "required_bits(6 dB, K=10, r=4, gap 0.09) = " + num(got));
}

// ---------------------------------------------------------------------
// 10: CLI output is byte-identical for any worker count
// ---------------------------------------------------------------------

void criterion_cli_determinism(const std::string &cli) {
    if (cli.empty()) {
        report(10, false, "CLI output is byte-identical across worker counts",
               "usage: acceptance <path-to-cli-binary>");
        return;
    }
    std::fprintf(stderr, "acceptance: CLI determinism across MIMO_FB_THREADS...\n");
    const int workers[3] = {1, 4, 8};
    std::vector<std::string> payloads;
    bool ran_ok = true;
    for (const int w : workers) {
        const std::string out = "acceptance_w" + std::to_string(w) + ".csv";
        setenv("MIMO_FB_THREADS", std::to_string(w).c_str(), 1);
        const std::string cmd = "\"" + cli +
                                "\" rate-curve --antennas 16 --users 4 --rank 2 "
                                "--trials 40 --snr 0:6:3 --seed 5 --out " +
                                out + " > /dev/null";
        ran_ok = ran_ok && std::system(cmd.c_str()) == 0;
        payloads.push_back(read_file(out));
        std::remove(out.c_str());
    }
    unsetenv("MIMO_FB_THREADS");
    const bool ok = ran_ok && !payloads[0].empty() && payloads[0] == payloads[1] &&
                    payloads[1] == payloads[2];
    report(10, ok, "CLI output is byte-identical across worker counts",
           ran_ok ? std::to_string(payloads[0].size()) + "-byte CSV identical at 1, 4, 8 workers"
                  : "CLI invocation failed");
}

} // namespace

int main(int argc, char **argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    criteria_rate_sweep();          // 1, 2
    criterion_error_bound_grid();   // 3
    criterion_sphere_law();         // 4
    criterion_ellipse_dominance();  // 5
    criterion_beta_chain();         // 6
    criterion_witness();            // 7
    criterion_required_bits_search(); // 8
    criterion_formula_pin();        // 9
    criterion_cli_determinism(cli); // 10
    if (!g_all_pass) {
        std::fprintf(stderr, "acceptance: FAILURES present\n");
        return 1;
    }
    std::fprintf(stderr, "acceptance: all criteria passed\n");
    return 0;
}
