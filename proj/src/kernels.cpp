// SPDX-License-Identifier: Apache-2.0

#include "mimofb/kernels.hpp"

#include "mimofb/errors.hpp"
#include "mimofb/rng.hpp"

#include <cmath>
#include <omp.h>
#include <stdexcept>

namespace mimofb::kernels {

int resolve_workers(int workers) {
    if (workers < 0)
        throw std::invalid_argument("resolve_workers: worker count must be >= 0");
    return workers == 0 ? omp_get_max_threads() : workers;
}

// ---------------------------------------------------------------------
// Materialized codebook scan
// ---------------------------------------------------------------------

// Kept out of line so both scan variants share one compiled floating-point
// schedule (inlining into differently vectorized loops could reorder the
// accumulation and break serial/parallel bit-equality).
__attribute__((noinline)) double column_score(const std::complex<double> *column,
                                              const std::complex<double> *x, arma::uword n) {
    double re = 0.0;
    double im = 0.0;
    for (arma::uword i = 0; i < n; i++) {
        const double xr = x[i].real();
        const double xi = x[i].imag();
        const double cr = column[i].real();
        const double ci = column[i].imag();
        re += xr * cr + xi * ci; // Re(conj(x_i) * c_i)
        im += xr * ci - xi * cr; // Im(conj(x_i) * c_i)
    }
    return re * re + im * im;
}

namespace {

// Deterministic combine rule shared by all scans: larger score wins, ties go
// to the lower index.  Lexicographic, hence associative and commutative, so
// any combine order yields the same winner.
inline void consider_max(ScanResult &best, double score, std::uint64_t index) {
    if (score > best.score || (score == best.score && index < best.index))
        best = {index, score};
}

void validate_scan_args(const arma::cx_mat &codewords, const arma::cx_vec &x) {
    if (codewords.n_cols < 1)
        throw std::invalid_argument("scan_columns: codebook has no codewords");
    if (codewords.n_rows != x.n_elem)
        throw std::invalid_argument("scan_columns: dimension mismatch");
}

} // namespace

ScanResult scan_columns_serial(const arma::cx_mat &codewords, const arma::cx_vec &x) {
    validate_scan_args(codewords, x);
    ScanResult best{0, -1.0};
    for (arma::uword j = 0; j < codewords.n_cols; j++)
        consider_max(best, column_score(codewords.colptr(j), x.memptr(), x.n_elem), j);
    return best;
}

ScanResult scan_columns_parallel(const arma::cx_mat &codewords, const arma::cx_vec &x,
                                 int workers) {
    validate_scan_args(codewords, x);
    const int nw = resolve_workers(workers);
    const std::int64_t n = static_cast<std::int64_t>(codewords.n_cols);
    ScanResult best{0, -1.0};
#pragma omp parallel num_threads(nw)
    {
        ScanResult local{0, -1.0};
#pragma omp for schedule(static) nowait
        for (std::int64_t j = 0; j < n; j++)
            consider_max(local, column_score(codewords.colptr(j), x.memptr(), x.n_elem),
                         static_cast<std::uint64_t>(j));
#pragma omp critical(mimofb_scan_columns)
        consider_max(best, local.score, local.index);
    }
    return best;
}

// ---------------------------------------------------------------------
// Streamed isotropic scan
// ---------------------------------------------------------------------

namespace {

struct U64Best {
    std::uint64_t value = UINT64_MAX;
    std::uint64_t index = UINT64_MAX;
};

inline void consider_min(U64Best &best, std::uint64_t value, std::uint64_t index) {
    if (value < best.value || (value == best.value && index < best.index))
        best = {value, index};
}

// Scans the Philox blocks covering codewords [2*block_begin, 2*block_end)
// intersected with [0, count); codeword i draws the u64 at slot i.
U64Best min_scan_blocks(std::uint64_t seed, std::uint64_t stream, std::uint64_t block_begin,
                        std::uint64_t block_end, std::uint64_t count) {
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const std::uint32_t s0 = static_cast<std::uint32_t>(stream);
    const std::uint32_t s1 = static_cast<std::uint32_t>(stream >> 32);
    U64Best best;
    for (std::uint64_t b = block_begin; b < block_end; b++) {
        const std::array<std::uint32_t, 4> out = philox4x32(
            {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32), s0, s1}, key);
        const std::uint64_t i = 2 * b;
        consider_min(best, static_cast<std::uint64_t>(out[0]) |
                               (static_cast<std::uint64_t>(out[1]) << 32),
                     i);
        if (i + 1 < count)
            consider_min(best, static_cast<std::uint64_t>(out[2]) |
                                   (static_cast<std::uint64_t>(out[3]) << 32),
                         i + 1);
    }
    return best;
}

StreamedBest finish_isotropic(const U64Best &best, arma::uword dim) {
    // Invert the CDF only for the winner: z = 1 - u^{1/(dim-1)}.
    const double u = u64_to_unit(best.value);
    StreamedBest out;
    out.index = best.index;
    out.z = 1.0 - std::pow(u, 1.0 / (static_cast<double>(dim) - 1.0));
    return out;
}

void validate_streamed_args(std::uint64_t count, arma::uword dim) {
    if (count < 1)
        throw std::invalid_argument("streamed scan: need at least one codeword");
    if (dim < 1)
        throw std::invalid_argument("streamed scan: dimension must be >= 1");
}

} // namespace

StreamedBest scan_isotropic_serial(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t count, arma::uword dim) {
    validate_streamed_args(count, dim);
    if (dim == 1)
        return {0, 1.0}; // every codeword matches the sole direction exactly
    const std::uint64_t blocks = (count + 1) / 2;
    return finish_isotropic(min_scan_blocks(seed, stream, 0, blocks, count), dim);
}

StreamedBest scan_isotropic_parallel(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t count, arma::uword dim, int workers) {
    validate_streamed_args(count, dim);
    if (dim == 1)
        return {0, 1.0};
    const int nw = resolve_workers(workers);
    const std::uint64_t blocks = (count + 1) / 2;
    // Split the block range into a worker-count-independent number of chunks;
    // each chunk's best is deterministic and the lexicographic combine makes
    // the final winner independent of completion order.
    const std::uint64_t chunks = std::min<std::uint64_t>(blocks, 256);
    U64Best best;
#pragma omp parallel num_threads(nw)
    {
        U64Best local;
#pragma omp for schedule(dynamic, 1) nowait
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); c++) {
            const std::uint64_t b0 = blocks * static_cast<std::uint64_t>(c) / chunks;
            const std::uint64_t b1 = blocks * (static_cast<std::uint64_t>(c) + 1) / chunks;
            const U64Best chunk_best = min_scan_blocks(seed, stream, b0, b1, count);
            consider_min(local, chunk_best.value, chunk_best.index);
        }
#pragma omp critical(mimofb_scan_isotropic)
        consider_min(best, local.value, local.index);
    }
    return finish_isotropic(best, dim);
}

arma::cx_vec isotropic_winner(const arma::cx_vec &p, double z, std::uint64_t seed,
                              std::uint64_t stream) {
    const arma::uword dim = p.n_elem;
    if (dim < 1)
        throw std::invalid_argument("isotropic_winner: empty reference direction");
    if (!(z >= 0.0) || z > 1.0)
        throw std::invalid_argument("isotropic_winner: z must lie in [0, 1]");
    Rng rng(seed, stream);
    const double theta = 2.0 * arma::datum::pi * rng.next_unit();
    const std::complex<double> phase(std::cos(theta), std::sin(theta));
    if (dim == 1)
        return phase * p;
    // Uniform unit direction orthogonal to p: project a Gaussian draw onto
    // the complement and normalize.  A degenerate projection has probability
    // zero; redraw defensively, never more than a fixed number of times.
    for (int attempt = 0; attempt < 100; attempt++) {
        arma::cx_vec g = rng.cnormal_vector(dim);
        const double graw = arma::norm(g);
        g -= p * arma::cdot(p, g);
        const double gperp = arma::norm(g);
        if (gperp > 1e-12 * graw) {
            return phase * std::sqrt(z) * p + std::sqrt(1.0 - z) * (g / gperp);
        }
    }
    throw numeric_error("isotropic_winner: could not draw an orthogonal direction");
}

// ---------------------------------------------------------------------
// Streamed ellipse scan
// ---------------------------------------------------------------------

namespace {

// z for one codeword of the ellipse ensemble; optionally exports the raw
// CN(0, I_r) draw.  m = conj(p) .* sigma and w = sigma^2 are precomputed by
// the caller.  Out of line for the same reason as column_score.
__attribute__((noinline)) double ellipse_score(std::uint64_t seed, std::uint64_t stream,
                                               std::uint64_t index, const double *m_re,
                                               const double *m_im, const double *w,
                                               arma::uword r, std::complex<double> *a_out) {
    constexpr double kHalfSqrt = 0.70710678118654752440; // 1/sqrt(2)
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const std::uint32_t s0 = static_cast<std::uint32_t>(stream);
    const std::uint32_t s1 = static_cast<std::uint32_t>(stream >> 32);
    double num_re = 0.0;
    double num_im = 0.0;
    double den = 0.0;
    for (arma::uword j = 0; j < r; j++) {
        const std::uint64_t block = index * r + j; // one block = one CN(0,1) entry
        const std::array<std::uint32_t, 4> out = philox4x32(
            {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), s0,
             s1},
            key);
        const std::uint64_t u0 =
            static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32);
        const std::uint64_t u1 =
            static_cast<std::uint64_t>(out[2]) | (static_cast<std::uint64_t>(out[3]) << 32);
        const double ar = inverse_normal_cdf(u64_to_unit(u0)) * kHalfSqrt;
        const double ai = inverse_normal_cdf(u64_to_unit(u1)) * kHalfSqrt;
        if (a_out != nullptr)
            a_out[j] = {ar, ai};
        num_re += m_re[j] * ar - m_im[j] * ai;
        num_im += m_re[j] * ai + m_im[j] * ar;
        den += w[j] * (ar * ar + ai * ai);
    }
    // den == 0 has probability zero; score it as a guaranteed loser rather
    // than emitting NaN, which would poison the argmax.
    return den > 0.0 ? (num_re * num_re + num_im * num_im) / den : 0.0;
}

struct EllipseContext {
    arma::vec m_re;
    arma::vec m_im;
    arma::vec w;
};

EllipseContext make_ellipse_context(const arma::vec &sigma, const arma::cx_vec &p) {
    if (sigma.n_elem < 1)
        throw std::invalid_argument("scan_ellipse: empty singular-value profile");
    if (p.n_elem != sigma.n_elem)
        throw std::invalid_argument("scan_ellipse: direction/profile size mismatch");
    if (sigma.min() <= 0.0)
        throw std::invalid_argument("scan_ellipse: singular values must be positive");
    EllipseContext ctx;
    ctx.m_re.set_size(sigma.n_elem);
    ctx.m_im.set_size(sigma.n_elem);
    ctx.w.set_size(sigma.n_elem);
    for (arma::uword j = 0; j < sigma.n_elem; j++) {
        ctx.m_re[j] = p[j].real() * sigma[j];  // conj(p_j) sigma_j
        ctx.m_im[j] = -p[j].imag() * sigma[j];
        ctx.w[j] = sigma[j] * sigma[j];
    }
    return ctx;
}

EllipseBest finish_ellipse(std::uint64_t seed, std::uint64_t stream, const ScanResult &best,
                           const EllipseContext &ctx, arma::uword r) {
    EllipseBest out;
    out.index = best.index;
    out.coeffs.set_size(r);
    out.z = ellipse_score(seed, stream, best.index, ctx.m_re.memptr(), ctx.m_im.memptr(),
                          ctx.w.memptr(), r, out.coeffs.memptr());
    return out;
}

} // namespace

EllipseBest scan_ellipse_serial(std::uint64_t seed, std::uint64_t stream, std::uint64_t count,
                                const arma::vec &sigma, const arma::cx_vec &p) {
    validate_streamed_args(count, sigma.n_elem);
    const EllipseContext ctx = make_ellipse_context(sigma, p);
    const arma::uword r = sigma.n_elem;
    ScanResult best{0, -1.0};
    for (std::uint64_t i = 0; i < count; i++)
        consider_max(best, ellipse_score(seed, stream, i, ctx.m_re.memptr(), ctx.m_im.memptr(),
                                         ctx.w.memptr(), r, nullptr),
                     i);
    return finish_ellipse(seed, stream, best, ctx, r);
}

EllipseBest scan_ellipse_parallel(std::uint64_t seed, std::uint64_t stream, std::uint64_t count,
                                  const arma::vec &sigma, const arma::cx_vec &p, int workers) {
    validate_streamed_args(count, sigma.n_elem);
    const EllipseContext ctx = make_ellipse_context(sigma, p);
    const arma::uword r = sigma.n_elem;
    const int nw = resolve_workers(workers);
    ScanResult best{0, -1.0};
#pragma omp parallel num_threads(nw)
    {
        ScanResult local{0, -1.0};
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); i++)
            consider_max(local, ellipse_score(seed, stream, static_cast<std::uint64_t>(i),
                                              ctx.m_re.memptr(), ctx.m_im.memptr(),
                                              ctx.w.memptr(), r, nullptr),
                         static_cast<std::uint64_t>(i));
#pragma omp critical(mimofb_scan_ellipse)
        consider_max(best, local.score, local.index);
    }
    return finish_ellipse(seed, stream, best, ctx, r);
}

} // namespace mimofb::kernels
