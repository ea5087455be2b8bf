// SPDX-License-Identifier: Apache-2.0

#include "mimofb/codebook.hpp"

#include "mimofb/errors.hpp"
#include "mimofb/kernels.hpp"
#include "mimofb/rng.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mimofb {

namespace {

// Slot layout inside a codebook generator stream: codeword i owns slots
// [i*2M, (i+1)*2M) for its M complex Gaussian entries.  Redraws (degenerate
// shaped norms) jump by a power-of-two offset far beyond any codeword index
// so they can never collide with first-attempt draws.
constexpr std::uint64_t kRedrawSlotOffset = 1ull << 40;

arma::cx_vec gaussian_codeword(std::uint64_t seed, arma::uword num_antennas,
                               std::uint64_t index, int attempt) {
    Rng rng(seed, stream_id(0, 0, Role::generic));
    rng.seek(index * 2 * num_antennas +
             static_cast<std::uint64_t>(attempt) * kRedrawSlotOffset);
    return rng.cnormal_vector(num_antennas);
}

void check_budget(arma::uword num_antennas, arma::uword bits, const CodebookBudget &budget) {
    if (bits > budget.max_bits) {
        std::ostringstream os;
        os << "codebook budget exceeded: B=" << bits << " is over the materialization cap of "
           << budget.max_bits << " bits";
        throw resource_limit_error(os.str());
    }
    const std::uint64_t bytes =
        (std::uint64_t{1} << bits) * static_cast<std::uint64_t>(num_antennas) * 16u;
    if (bytes > budget.max_bytes) {
        std::ostringstream os;
        os << "codebook budget exceeded: B=" << bits << " with " << num_antennas
           << " antennas needs " << bytes << " bytes (cap " << budget.max_bytes << ")";
        throw resource_limit_error(os.str());
    }
}

} // namespace

Codebook build_rvq(arma::uword num_antennas, arma::uword bits, std::uint64_t seed,
                   const CodebookBudget &budget) {
    if (num_antennas < 1)
        throw std::invalid_argument("build_rvq: need at least one antenna");
    check_budget(num_antennas, bits, budget);
    const arma::uword count = arma::uword(1) << bits;
    Codebook book;
    book.kind = CodebookKind::rvq;
    book.bits = bits;
    book.seed = seed;
    book.codewords.set_size(num_antennas, count);
    for (arma::uword i = 0; i < count; i++) {
        const arma::cx_vec g = gaussian_codeword(seed, num_antennas, i, 0);
        // A 2M-dimensional Gaussian never lands at the origin in practice;
        // the guard keeps the normalization defined regardless.
        const double nrm = arma::norm(g);
        if (!(nrm > 0.0))
            throw numeric_error("build_rvq: degenerate Gaussian draw");
        book.codewords.col(i) = g / nrm;
    }
    return book;
}

Codebook build_statistics(std::shared_ptr<const CorrelationModel> model, arma::uword bits,
                          std::uint64_t seed, const CodebookBudget &budget) {
    if (model == nullptr)
        throw std::invalid_argument("build_statistics: null correlation model");
    check_budget(model->num_antennas, bits, budget);
    const arma::uword count = arma::uword(1) << bits;
    Codebook book;
    book.kind = CodebookKind::statistics;
    book.bits = bits;
    book.seed = seed;
    book.correlation = model;
    book.codewords.set_size(model->num_antennas, count);
    // Shaping happens before normalization: the direction of R^{1/2} g
    // equals the direction of R^{1/2} (g / ||g||), so codeword i of the
    // statistics book is the pushed-forward codeword i of the rvq book.
    const double scale = model->singular_values.max();
    for (arma::uword i = 0; i < count; i++) {
        arma::cx_vec shaped;
        double nrm = 0.0;
        int attempt = 0;
        for (; attempt < 100; attempt++) {
            const arma::cx_vec g = gaussian_codeword(seed, model->num_antennas, i, attempt);
            shaped = model->shape(g);
            nrm = arma::norm(shaped);
            // Degenerate only if g is (numerically) orthogonal to the whole
            // correlation subspace — probability zero, redraw defensively.
            if (nrm > 1e-14 * scale * arma::norm(g))
                break;
        }
        if (attempt == 100)
            throw numeric_error("build_statistics: repeated degenerate shaped draws");
        book.codewords.col(i) = shaped / nrm;
    }
    return book;
}

Codebook build_eigen_baseline(std::shared_ptr<const CorrelationModel> model) {
    if (model == nullptr)
        throw std::invalid_argument("build_eigen_baseline: null correlation model");
    Codebook book;
    book.kind = CodebookKind::eigen_baseline;
    book.bits = 0;
    book.seed = model->seed;
    book.correlation = model;
    // Singular values are stored descending, so column 0 of the eigenbasis
    // is the principal eigenvector of R.
    book.codewords = model->eigenbasis.col(0);
    return book;
}

// ---------------------------------------------------------------------
// Quantization
// ---------------------------------------------------------------------

QuantizationOutcome quantize(const ChannelSample &sample, const Codebook &book, int workers) {
    if (sample.h.n_elem != book.dim())
        throw std::invalid_argument("quantize: sample/codebook dimension mismatch");
    if (!(sample.norm_sq > 0.0))
        throw std::invalid_argument("quantize: zero-norm channel sample");
    const kernels::ScanResult best =
        kernels::scan_columns_parallel(book.codewords, sample.direction, workers);
    QuantizationOutcome out;
    out.index = best.index;
    out.z = best.score;
    // z can exceed 1 by a few ulps when the winner is nearly parallel to the
    // channel; clamp the error, never the certificate z itself.
    out.quant_error = std::max(0.0, 1.0 - best.score);
    out.feedback = std::sqrt(sample.norm_sq) * book.codewords.col(best.index);
    return out;
}

std::optional<DirectionDecomposition> decompose(const ChannelSample &sample,
                                                const QuantizationOutcome &outcome) {
    if (outcome.feedback.n_elem != sample.h.n_elem)
        throw std::invalid_argument("decompose: sample/outcome dimension mismatch");
    if (outcome.quant_error < 1e-12)
        return std::nullopt; // perfectly quantized: no residual direction
    const arma::cx_vec codeword = outcome.feedback / std::sqrt(sample.norm_sq);
    const std::complex<double> alpha = arma::cdot(codeword, sample.direction);
    arma::cx_vec residual = sample.direction - codeword * alpha;
    const double rnorm = arma::norm(residual);
    if (!(rnorm > 0.0))
        return std::nullopt; // X > 0 but the residual underflowed: degenerate
    const double amag = std::abs(alpha);
    const std::complex<double> phase =
        amag > 0.0 ? alpha / amag : std::complex<double>(1.0, 0.0);
    DirectionDecomposition d;
    d.aligned = codeword * phase;
    d.residual = residual / rnorm;
    d.quant_error = outcome.quant_error;
    return d;
}

// ---------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'C', 'B', 'K', '1'};

void put_u32(std::ostream &os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char *>(b), 4);
}

std::uint32_t get_u32(std::istream &is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char *>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace

void save_codebook(const Codebook &book, const std::string &path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("save_codebook: cannot open '" + path + "' for writing");
    os.write(kMagic, 4);
    put_u32(os, static_cast<std::uint32_t>(book.dim()));
    put_u32(os, static_cast<std::uint32_t>(book.bits));
    put_u32(os, static_cast<std::uint32_t>(book.kind));
    // Column-major (re, im) float64 pairs; this code only targets
    // little-endian IEEE hosts, so the in-memory layout is the file layout.
    static_assert(sizeof(std::complex<double>) == 16);
    os.write(reinterpret_cast<const char *>(book.codewords.memptr()),
             static_cast<std::streamsize>(book.codewords.n_elem * 16));
    if (!os)
        throw std::runtime_error("save_codebook: short write to '" + path + "'");
}

Codebook load_codebook(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("load_codebook: cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_codebook: '" + path + "' is not a codebook file");
    const std::uint32_t antennas = get_u32(is);
    const std::uint32_t bits = get_u32(is);
    const std::uint32_t kind = get_u32(is);
    if (!is || antennas < 1 || bits > 40 || kind > 2)
        throw std::runtime_error("load_codebook: malformed header in '" + path + "'");
    Codebook book;
    book.kind = static_cast<CodebookKind>(kind);
    book.bits = bits;
    book.codewords.set_size(antennas, arma::uword(1) << bits);
    is.read(reinterpret_cast<char *>(book.codewords.memptr()),
            static_cast<std::streamsize>(book.codewords.n_elem * 16));
    if (!is)
        throw std::runtime_error("load_codebook: truncated payload in '" + path + "'");
    return book;
}

} // namespace mimofb
