// SPDX-License-Identifier: Apache-2.0
//
// mimo_fb: command-line front end for the simulator.
//
// Subcommands: rate-curve, required-bits, bound-suite, quantize-demo.  Result
// tables go to stdout; progress and timing go to stderr so redirected output
// stays byte-reproducible for a fixed configuration and seed.

#include "mimofb/bounds.hpp"
#include "mimofb/channel.hpp"
#include "mimofb/codebook.hpp"
#include "mimofb/errors.hpp"
#include "mimofb/experiments.hpp"
#include "mimofb/io.hpp"
#include "mimofb/kernels.hpp"
#include "mimofb/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace mimofb;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_rate_table(const SweepResult &result) {
    const bool by_rank = result.kind == "required-bits";
    std::vector<PointRecord> rows = result.records;
    std::stable_sort(rows.begin(), rows.end(),
                     [by_rank](const PointRecord &a, const PointRecord &b) {
                         if (by_rank) {
                             if (a.rank != b.rank)
                                 return a.rank < b.rank;
                         } else if (a.snr_db != b.snr_db) {
                             return a.snr_db < b.snr_db;
                         }
                         return a.scheme < b.scheme;
                     });
    std::printf("%8s", "snr_db");
    if (by_rank)
        std::printf(" %5s", "rank");
    std::printf(" %-11s %6s %10s %10s %10s %10s %10s %5s\n", "scheme", "bits", "mean_rate",
                "stderr", "quant_err", "gap_ideal", "gap_bound", "disc");
    for (const PointRecord &r : rows) {
        std::printf("%8.3g", r.snr_db);
        if (by_rank)
            std::printf(" %5llu", static_cast<unsigned long long>(r.rank));
        std::printf(" %-11s %6g %10.4f %10.2e %10.4g %10.4f %10.4f %5llu\n", r.scheme.c_str(),
                    r.bits, r.mean_rate, r.rate_stderr, r.mean_quant_error, r.gap_vs_ideal,
                    r.gap_bound, static_cast<unsigned long long>(r.discarded));
    }
}

void write_if_requested(const SweepResult &result, const CliInvocation &inv) {
    if (inv.output_path.empty())
        return;
    write_sweep(result, inv.output_path, inv.format);
    std::fprintf(stderr, "wrote %s (%s)\n", inv.output_path.c_str(), inv.format.c_str());
}

int run_rate_curve_cmd(const CliInvocation &inv) {
    std::fprintf(stderr, "rate-curve: %zu operating points x %llu trials, config %s\n",
                 inv.config.snr_grid_db.size(),
                 static_cast<unsigned long long>(inv.config.trials),
                 config_hash_hex(inv.config).c_str());
    const auto start = std::chrono::steady_clock::now();
    const SweepResult result = run_rate_curve(inv.config);
    std::fprintf(stderr, "done in %.1f s\n", seconds_since(start));
    print_rate_table(result);
    if (inv.config.check_identity)
        std::printf("max interference-factorization witness error: %.3e\n",
                    result.max_witness_error);
    write_if_requested(result, inv);
    return EXIT_OK;
}

int run_required_bits_cmd(const CliInvocation &inv) {
    std::fprintf(stderr, "required-bits: %zu ranks, gap target %.3f bits/s/Hz, cap B=%llu\n",
                 inv.ranks.size(), inv.gap_target_bps,
                 static_cast<unsigned long long>(inv.search_cap));
    const auto start = std::chrono::steady_clock::now();
    const SweepResult result =
        find_required_bits(inv.config, inv.ranks, inv.gap_target_bps, inv.search_cap);
    std::fprintf(stderr, "done in %.1f s\n", seconds_since(start));
    print_rate_table(result);
    std::printf("\n%5s %6s %12s %13s %s\n", "rank", "bits", "measured_gap", "formula_bits",
                "status");
    for (const RequiredBitsRecord &r : result.required_bits)
        std::printf("%5llu %6llu %12.4f %13.3f %s\n",
                    static_cast<unsigned long long>(r.rank),
                    static_cast<unsigned long long>(r.bits), r.measured_gap, r.formula_bits,
                    r.reachable ? "ok" : "cap-hit");
    write_if_requested(result, inv);
    return EXIT_OK;
}

int run_bound_suite_cmd(const CliInvocation &inv) {
    std::fprintf(stderr, "bound-suite: seed %llu\n",
                 static_cast<unsigned long long>(inv.config.seed));
    const auto start = std::chrono::steady_clock::now();
    const std::vector<BoundReport> reports =
        inv.lattice.empty() ? run_bound_suite(inv.config.seed)
                            : run_bound_suite(inv.config.seed, inv.lattice);
    std::fprintf(stderr, "done in %.1f s\n", seconds_since(start));
    std::printf("%-18s %5s %5s %-10s %8s %12s %12s %10s %s\n", "family", "rank", "bits",
                "profile", "samples", "empirical", "reference", "margin", "result");
    bool all_pass = true;
    for (const BoundReport &r : reports) {
        std::printf("%-18s %5llu %5llu %-10s %8llu %12.5g %12.5g %10.3g %s\n",
                    r.family.c_str(), static_cast<unsigned long long>(r.rank),
                    static_cast<unsigned long long>(r.bits), r.profile.c_str(),
                    static_cast<unsigned long long>(r.samples), r.empirical, r.reference,
                    r.margin, r.pass ? "pass" : "FAIL");
        all_pass = all_pass && r.pass;
    }
    std::printf("%s\n", all_pass ? "all bound families pass" : "BOUND FAMILY FAILURE");
    if (!inv.output_path.empty()) {
        write_bound_reports(reports, inv.config.seed, inv.output_path);
        std::fprintf(stderr, "wrote %s (json)\n", inv.output_path.c_str());
    }
    return all_pass ? EXIT_OK : EXIT_FAILURE_GENERIC;
}

int run_quantize_demo_cmd(const CliInvocation &inv) {
    const ExperimentConfig &cfg = inv.config;
    auto model = std::make_shared<const CorrelationModel>(
        make_correlation(cfg.num_antennas, cfg.rank, cfg.profile, cfg.seed));

    Codebook book;
    if (inv.demo_kind == "statistics")
        book = build_statistics(model, inv.demo_bits, cfg.seed);
    else if (inv.demo_kind == "rvq")
        book = build_rvq(cfg.num_antennas, inv.demo_bits, cfg.seed);
    else
        book = build_eigen_baseline(model);

    Rng rng(cfg.seed, stream_id(0, 0, Role::channel));
    const ChannelSample sample = draw_channel(*model, rng);
    const QuantizationOutcome outcome = quantize(sample, book);

    std::printf("codebook      : %s (B=%llu, %llu codewords, dim %llu)\n",
                inv.demo_kind.c_str(), static_cast<unsigned long long>(book.bits),
                static_cast<unsigned long long>(book.size()),
                static_cast<unsigned long long>(book.dim()));
    std::printf("channel       : M=%llu, rank r=%llu, profile %s, ||h||^2 = %.6g\n",
                static_cast<unsigned long long>(cfg.num_antennas),
                static_cast<unsigned long long>(cfg.rank), cfg.profile.label().c_str(),
                sample.norm_sq);
    std::printf("selected index: %llu\n", static_cast<unsigned long long>(outcome.index));
    std::printf("cos^2 match   : %.6f\n", outcome.z);
    std::printf("quant error X : %.6f\n", outcome.quant_error);
    if (cfg.rank >= 2 && inv.demo_kind == "statistics")
        std::printf("mean-X bound  : 2^(-B/(r-1)) = %.6f\n",
                    quant_error_bound(static_cast<double>(inv.demo_bits), cfg.rank));

    if (const auto split = decompose(sample, outcome)) {
        const arma::cx_vec rebuilt = std::sqrt(1.0 - split->quant_error) * split->aligned +
                                     std::sqrt(split->quant_error) * split->residual;
        std::printf("split check   : |direction - rebuilt| = %.3e, |c_F^H s| = %.3e\n",
                    arma::norm(sample.direction - rebuilt),
                    std::abs(arma::cdot(split->aligned, split->residual)));
    } else {
        std::printf("split check   : aligned within rounding (X below 1e-12)\n");
    }

    if (!inv.demo_save_path.empty()) {
        save_codebook(book, inv.demo_save_path);
        std::printf("saved         : %s\n", inv.demo_save_path.c_str());
    }
    return EXIT_OK;
}

int dispatch(const CliInvocation &inv) {
    if (inv.subcommand == "rate-curve")
        return run_rate_curve_cmd(inv);
    if (inv.subcommand == "required-bits")
        return run_required_bits_cmd(inv);
    if (inv.subcommand == "bound-suite")
        return run_bound_suite_cmd(inv);
    if (inv.subcommand == "quantize-demo")
        return run_quantize_demo_cmd(inv);
    throw std::invalid_argument("unknown subcommand '" + inv.subcommand + "'");
}

} // namespace

int main(int argc, char **argv) {
    try {
        const mimofb::CliParseOutcome outcome = mimofb::parse_cli(argc, argv);
        if (outcome.help_requested) {
            std::fputs(outcome.help_text.c_str(), stdout);
            return mimofb::EXIT_OK;
        }
        return dispatch(outcome.invocation);
    } catch (const mimofb::resource_limit_error &e) {
        std::fprintf(stderr, "resource limit: %s\n", e.what());
        return mimofb::EXIT_RESOURCE_LIMIT;
    } catch (const mimofb::numeric_error &e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return mimofb::EXIT_NUMERIC;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return mimofb::EXIT_USAGE;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return mimofb::EXIT_FAILURE_GENERIC;
    }
}
