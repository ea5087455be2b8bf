// SPDX-License-Identifier: Apache-2.0
//
// bench_kernels: timing comparison between the serial reference kernels and
// their OpenMP counterparts.  Each workload is scored both ways; the tool
// verifies the winners agree bit-for-bit before reporting a speedup, since
// the parallel kernels are only useful if they are drop-in replacements.

#include "mimofb/kernels.hpp"
#include "mimofb/rng.hpp"

#include <CLI11.hpp>

#include <armadillo>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

namespace {

using namespace mimofb;
using namespace mimofb::kernels;

double best_seconds(int reps, const std::function<void()> &fn) {
    double best = 1e300;
    for (int i = 0; i < reps; i++) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        best = std::min(best, s);
    }
    return best;
}

void report(const char *name, std::uint64_t items, double serial_s, double parallel_s,
            bool agree, int workers) {
    std::printf("%-22s %12llu %10.1f %10.1f %7.2fx %s\n", name,
                static_cast<unsigned long long>(items), serial_s * 1e3, parallel_s * 1e3,
                serial_s / parallel_s, agree ? "match" : "MISMATCH");
    if (!agree)
        std::fprintf(stderr, "%s: serial and %d-worker results differ\n", name, workers);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"serial vs OpenMP kernel timings"};
    int workers = 0;
    int reps = 3;
    std::uint64_t scale = 1;
    app.add_option("--workers", workers, "OpenMP workers (0 = library default)");
    app.add_option("--reps", reps, "repetitions per measurement (best is kept)")
        ->check(CLI::Range(1, 100));
    app.add_option("--scale", scale, "workload multiplier")->check(CLI::Range(1, 64));
    CLI11_PARSE(app, argc, argv);

    const int resolved = resolve_workers(workers);
    std::printf("workers: %d\n\n", resolved);
    std::printf("%-22s %12s %10s %10s %8s %s\n", "kernel", "items", "serial_ms", "omp_ms",
                "speedup", "agreement");

    bool all_match = true;
    const std::uint64_t seed = 42;

    { // Materialized codebook scan: M=64 against 2^14 columns.
        const arma::uword m = 64;
        const arma::uword n = arma::uword(16384 * scale);
        Rng rng(seed, stream_id(0, 0, Role::generic));
        arma::cx_mat cols(m, n);
        for (arma::uword j = 0; j < n; j++)
            cols.col(j) = rng.cnormal_vector(m);
        arma::cx_vec x = rng.cnormal_vector(m);
        x /= arma::norm(x);

        ScanResult rs{}, rp{};
        const double ts = best_seconds(reps, [&] { rs = scan_columns_serial(cols, x); });
        const double tp =
            best_seconds(reps, [&] { rp = scan_columns_parallel(cols, x, workers); });
        const bool agree = rs.index == rp.index && rs.score == rp.score;
        all_match = all_match && agree;
        report("materialized-scan", n, ts, tp, agree, resolved);
    }

    { // Streamed isotropic scan: dimension 4, 2^22 codewords.
        const arma::uword dim = 4;
        const std::uint64_t count = 4194304ull * scale;
        StreamedBest rs{}, rp{};
        const double ts = best_seconds(
            reps, [&] { rs = scan_isotropic_serial(seed, stream_id(1, 0, Role::rvq_scan), count, dim); });
        const double tp = best_seconds(reps, [&] {
            rp = scan_isotropic_parallel(seed, stream_id(1, 0, Role::rvq_scan), count, dim,
                                         workers);
        });
        const bool agree = rs.index == rp.index && rs.z == rp.z;
        all_match = all_match && agree;
        report("streamed-isotropic", count, ts, tp, agree, resolved);
    }

    { // Streamed hyper-ellipse scan: rank 6, 2^20 codewords.
        const arma::uword rank = 6;
        const std::uint64_t count = 1048576ull * scale;
        Rng rng(seed, stream_id(2, 0, Role::generic));
        arma::vec sigma = arma::linspace(1.5, 0.5, rank);
        arma::cx_vec p = rng.cnormal_vector(rank);
        p /= arma::norm(p);

        EllipseBest rs{}, rp{};
        const double ts = best_seconds(reps, [&] {
            rs = scan_ellipse_serial(seed, stream_id(2, 0, Role::stats_scan), count, sigma, p);
        });
        const double tp = best_seconds(reps, [&] {
            rp = scan_ellipse_parallel(seed, stream_id(2, 0, Role::stats_scan), count, sigma,
                                       p, workers);
        });
        const bool agree = rs.index == rp.index && rs.z == rp.z;
        all_match = all_match && agree;
        report("streamed-ellipse", count, ts, tp, agree, resolved);
    }

    std::printf("\n%s\n", all_match ? "all kernels agree" : "KERNEL MISMATCH");
    return all_match ? 0 : 1;
}
