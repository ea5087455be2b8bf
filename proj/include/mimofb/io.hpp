// SPDX-License-Identifier: Apache-2.0
//
// Command-line parsing, config hashing and result serialization.
//
// Output files are reproducibility-first: every CSV and JSON file embeds a
// provenance line (config hash + seed) and all rows are sorted by a stable
// key, so byte-identical files mean identical experiments — regardless of
// worker count, which is deliberately excluded from the hash.

#ifndef MIMOFB_IO_HPP
#define MIMOFB_IO_HPP

#include "mimofb/bounds.hpp"
#include "mimofb/experiments.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mimofb {

// Everything a CLI run needs, independent of the argument parser.
struct CliInvocation {
    std::string subcommand; // rate-curve | required-bits | bound-suite | quantize-demo
    ExperimentConfig config;

    // required-bits
    std::vector<arma::uword> ranks = {2, 3, 4};
    double gap_target_bps = 1.0;
    arma::uword search_cap = 26;

    // bound-suite
    std::vector<std::pair<arma::uword, arma::uword>> lattice; // empty = default

    // quantize-demo
    arma::uword demo_bits = 6;
    std::string demo_kind = "statistics"; // statistics | rvq | eigen
    std::string demo_save_path;           // optional .cbk dump

    std::string output_path; // empty = stdout table only
    std::string format = "csv"; // csv | json
};

// Parses argv (subcommand style, see --help).  A config file given with
// --config supplies key=value defaults using the long option names; flags on
// the command line win.  Throws std::invalid_argument with a usage message
// on bad input; sets help_requested instead of throwing for --help.
struct CliParseOutcome {
    CliInvocation invocation;
    bool help_requested = false;
    std::string help_text;
};
CliParseOutcome parse_cli(int argc, const char *const argv[]);

// "lo:hi:step" (inclusive when reachable), "a,b,c", or a single value.
std::vector<double> parse_snr_spec(const std::string &spec);

// "equal", "exp:RHO", or "explicit:w1,w2,...".
EigenvalueProfile parse_profile(const std::string &spec);

// "scaled", "scaled:OFFSET", or "fixed:B".
BitRule parse_bit_rule(const std::string &spec);

// FNV-1a over the canonical config string.  Worker count is excluded: it
// must never change results, so it must never change the hash.
std::uint64_t config_hash(const ExperimentConfig &config);
std::string config_hash_hex(const ExperimentConfig &config);

// Writes a sweep to CSV (pinned column set, '#' provenance line, rows
// sorted by (snr_db, scheme) — required-bits sweeps carry a rank column and
// sort by (rank, scheme)) or to JSON (full structured dump).  Throws
// std::runtime_error with the path on I/O failure.
void write_sweep(const SweepResult &result, const std::string &path,
                 const std::string &format = "csv");

// Bound-suite reports as a JSON array.
void write_bound_reports(const std::vector<BoundReport> &reports, std::uint64_t seed,
                         const std::string &path);

// The CSV payload as a string (used by write_sweep and by tests that pin
// the byte format without touching the filesystem).
std::string render_sweep_csv(const SweepResult &result);

} // namespace mimofb

#endif // MIMOFB_IO_HPP
