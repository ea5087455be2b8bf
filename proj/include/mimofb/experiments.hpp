// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo experiment drivers.
//
// Two experiments are supported: per-user rate versus SNR for a set of
// feedback schemes, and the minimum feedback bit count that keeps the rate
// gap to perfect feedback below a target, swept over correlation ranks.
//
// Simulations never materialize codebooks.  The quantization scan is
// evaluated in its reduced form (kernels.hpp): for an equal eigenvalue
// profile the subspace scan is isotropic in C^r, for RVQ it is isotropic in
// C^M, and for a general profile the ellipse kernel scores each codeword
// from its own counter-addressed Gaussian draw.  The winning codeword is
// reconstructed exactly and everything downstream (zero forcing, rates,
// factorization witnesses) runs on full M-dimensional vectors.  Unit tests
// cross-validate the reduced scans against materialized codebooks.
//
// Determinism: every random object is addressed by (seed, trial, user,
// role), trial results land in per-trial slots, and aggregation uses
// pairwise sums in trial order — so results are bit-identical for any
// worker count, and adding a scheme never perturbs the others' draws.

#ifndef MIMOFB_EXPERIMENTS_HPP
#define MIMOFB_EXPERIMENTS_HPP

#include "mimofb/bounds.hpp"
#include "mimofb/channel.hpp"

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

namespace mimofb {

// Feedback schemes the simulator can evaluate side by side.
enum class Scheme {
    ideal,          // perfect channel knowledge at the transmitter
    statistics,     // correlation-shaped random codebook, B bits
    rvq,            // isotropic random codebook, B bits
    eigen_baseline, // principal eigenvector only, zero bits
};

// Stable labels used in CSV/JSON output and config parsing.
std::string scheme_label(Scheme scheme);
Scheme scheme_from_label(const std::string &label);

// How the per-point feedback budget is chosen on a rate curve.
struct BitRule {
    enum class Kind { scaled, fixed };
    Kind kind = Kind::scaled;
    double offset = 3.17; // scaled: B = (r-1)/3 * SNR_dB + offset
    double fixed_bits = 0.0;

    static BitRule scaled(double offset = 3.17);
    static BitRule fixed(double bits);
};

// The rule output before and after rounding up to a whole bit.
struct BitBudget {
    arma::uword bits = 0;    // what the simulation uses
    double unrounded = 0.0;  // what the rule produced (logged, not simulated)
};
BitBudget resolve_bits(const BitRule &rule, double snr_db, arma::uword rank);

struct ExperimentConfig {
    arma::uword num_antennas = 64; // M
    arma::uword num_users = 10;    // K
    arma::uword rank = 4;          // r
    EigenvalueProfile profile = EigenvalueProfile::equal();
    std::vector<double> snr_grid_db = {0, 3, 6, 9, 12, 15, 18};
    std::vector<Scheme> schemes = {Scheme::ideal, Scheme::statistics, Scheme::rvq,
                                   Scheme::eigen_baseline};
    BitRule bit_rule;
    arma::uword trials = 500;
    std::uint64_t seed = 42;
    bool shared_correlation = false; // one correlation model for all users
    bool check_identity = false;     // evaluate the factorization witness per sample
    int workers = 0;                 // trial-loop worker cap; 0 = OpenMP default
};

// One aggregated (operating point, scheme) row.
struct PointRecord {
    double snr_db = 0.0;
    arma::uword rank = 0;
    std::string scheme;
    double bits = 0.0;           // feedback bits this row used (0 for ideal)
    double bits_unrounded = 0.0; // rule output before rounding
    double mean_rate = 0.0;      // per-user rate, averaged over valid trials
    double rate_stderr = 0.0;
    double mean_quant_error = 0.0; // mean X across users/trials; NaN for ideal
    double gap_vs_ideal = 0.0;     // ideal mean rate minus this row's
    double gap_bound = 0.0;        // closed-form bound on that gap
    arma::uword discarded = 0;     // trials dropped by the condition guard
    arma::uword valid_trials = 0;
};

// One rank's outcome of the minimum-feedback search.
struct RequiredBitsRecord {
    arma::uword rank = 0;
    bool reachable = false;
    arma::uword bits = 0;      // minimal B found (or the search cap)
    double measured_gap = 0.0; // gap at that B
    double formula_bits = 0.0; // closed-form requirement at the same target
};

struct SweepResult {
    std::string kind; // "rate-curve" or "required-bits"
    std::vector<PointRecord> records;
    std::vector<RequiredBitsRecord> required_bits; // required-bits runs only
    double max_witness_error = 0.0;                // largest factorization deviation seen
    ExperimentConfig config;
};

// ---------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------

// All configured schemes, one trial, one operating point.  Entry i of the
// result aligns with config.schemes[i].
struct TrialResult {
    std::vector<double> mean_rate;        // per scheme; 0 when discarded
    std::vector<double> mean_quant_error; // per scheme; NaN for ideal
    std::vector<bool> discarded;          // condition guard hit
    double witness_error = 0.0;           // max factorization deviation (if checked)
};
TrialResult run_trial(const ExperimentConfig &config, double snr_db,
                      std::uint64_t trial_index);

// Rate-versus-SNR sweep over config.snr_grid_db.
SweepResult run_rate_curve(const ExperimentConfig &config);

// Minimum B (searched upward from 0) for which the statistics-codebook rate
// gap to ideal drops to gap_target_bps, per rank.  Operates at the single
// (and only allowed) SNR grid entry.  Ranks where the cap is hit are marked
// unreachable.
SweepResult find_required_bits(const ExperimentConfig &config,
                               const std::vector<arma::uword> &ranks, double gap_target_bps,
                               arma::uword search_cap = 26);

// Empirical verification of every bound family over an (r, B) lattice.
std::vector<BoundReport> run_bound_suite(std::uint64_t seed);
std::vector<BoundReport> run_bound_suite(
    std::uint64_t seed, const std::vector<std::pair<arma::uword, arma::uword>> &lattice);

} // namespace mimofb

#endif // MIMOFB_EXPERIMENTS_HPP
