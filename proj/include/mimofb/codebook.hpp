// SPDX-License-Identifier: Apache-2.0
//
// Quantization codebooks and channel-direction feedback.
//
// Three codebook kinds share one container:
//
//   rvq             2^B independent uniform unit vectors in C^M.
//   statistics      the same underlying Gaussian draws pushed through the
//                   correlation square root and renormalized, so codewords
//                   concentrate where the channel actually lives.  With an
//                   identity-like correlation this reduces to rvq.
//   eigen_baseline  the single principal eigenvector (a zero-bit book);
//                   the classical statistics-only baseline.
//
// Codeword i is generated from RNG slots owned by i alone, so a book with
// B+1 bits extends a book with B bits by new columns only (nested prefixes)
// and a book can be rebuilt column-by-column without materializing others.

#ifndef MIMOFB_CODEBOOK_HPP
#define MIMOFB_CODEBOOK_HPP

#include "mimofb/channel.hpp"

#include <armadillo>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace mimofb {

enum class CodebookKind : std::uint32_t {
    rvq = 0,
    statistics = 1,
    eigen_baseline = 2,
};

// Materialization guard.  Books are dense M x 2^B complex matrices, so both
// the exponent and the resulting byte count are capped; exceeding either is
// a resource_limit_error naming the offending bit count.
struct CodebookBudget {
    arma::uword max_bits = 26;
    std::uint64_t max_bytes = 2ull * 1024 * 1024 * 1024; // 2 GiB
};

struct Codebook {
    CodebookKind kind = CodebookKind::rvq;
    arma::uword bits = 0;    // B; the book holds 2^B codewords
    arma::cx_mat codewords;  // unit-norm columns, M x 2^B
    std::uint64_t seed = 0;  // generator seed (provenance)
    // Generating model for statistics / eigen_baseline books; null for rvq
    // and for books read back from disk (provenance is not persisted).
    std::shared_ptr<const CorrelationModel> correlation;

    arma::uword dim() const { return codewords.n_rows; }
    arma::uword size() const { return codewords.n_cols; }
};

Codebook build_rvq(arma::uword num_antennas, arma::uword bits, std::uint64_t seed,
                   const CodebookBudget &budget = {});

Codebook build_statistics(std::shared_ptr<const CorrelationModel> model, arma::uword bits,
                          std::uint64_t seed, const CodebookBudget &budget = {});

Codebook build_eigen_baseline(std::shared_ptr<const CorrelationModel> model);

// ---------------------------------------------------------------------
// Quantization
// ---------------------------------------------------------------------

// Feedback decision for one channel: F maximizes the squared cosine between
// the channel direction and the codewords.
struct QuantizationOutcome {
    std::uint64_t index = 0;   // selected codeword F
    double z = 0.0;            // |direction^H c_F|^2, the squared cosine
    double quant_error = 0.0;  // X = max(0, 1 - z), clamped against rounding
    arma::cx_vec feedback;     // ||h|| c_F: what the transmitter reconstructs
};

// Scans the materialized book (ties resolve to the lowest index).  Throws
// std::invalid_argument on dimension mismatch or a zero-norm sample.
QuantizationOutcome quantize(const ChannelSample &sample, const Codebook &book,
                             int workers = 0);

// Exact two-term split of the channel direction:
//   direction = sqrt(1-X) aligned + sqrt(X) residual,
// with `aligned` the phase-rotated codeword and `residual` the unit vector
// orthogonal to it.  Returns nullopt when X is numerically zero (below
// 1e-12): the residual direction is then meaningless.
struct DirectionDecomposition {
    arma::cx_vec aligned;     // e^{i phi} c_F
    arma::cx_vec residual;    // unit s with c_F^H s = 0
    double quant_error = 0.0; // X
};

std::optional<DirectionDecomposition> decompose(const ChannelSample &sample,
                                                const QuantizationOutcome &outcome);

// ---------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------

// Binary codebook file: 16-byte header (magic "CBK1", u32 antennas, u32
// bits, u32 kind, little-endian) followed by the codewords column-major as
// little-endian float64 (re, im) pairs.
void save_codebook(const Codebook &book, const std::string &path);
Codebook load_codebook(const std::string &path);

} // namespace mimofb

#endif // MIMOFB_CODEBOOK_HPP
