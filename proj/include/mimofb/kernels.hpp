// SPDX-License-Identifier: Apache-2.0
//
// Quantization scan kernels.
//
// Every kernel exists in two variants: a plain serial reference and an
// OpenMP-parallel version.  Both compute identical per-codeword values from
// the counter-based RNG (or from the same materialized columns) and combine
// them with an order-independent lexicographic argmax, so the two variants
// are bit-identical for any worker count.  The serial forms are the
// correctness reference in tests; tools/bench_kernels compares throughput.
//
// Scans come in three flavors:
//
//   scan_columns_*    argmax_i |x^H C(:,i)|^2 over a materialized codebook.
//
//   scan_isotropic_*  streamed scan over an isotropically distributed
//                     codebook.  The squared inner product between a fixed
//                     unit vector and an independent uniform unit vector in
//                     C^dim has CDF 1 - (1-z)^(dim-1), so z_i = 1 -
//                     u_i^{1/(dim-1)} for a uniform u_i, and the argmax over
//                     z is the argmin over the raw 64-bit uniforms.  One u64
//                     per codeword (slot = codeword index), transcendentals
//                     only for the winner.
//
//   scan_ellipse_*    streamed scan for a non-uniform eigenvalue profile.
//                     With codewords c_i = R^{1/2} w_i / ||R^{1/2} w_i|| and
//                     a channel direction whose subspace coefficients are p,
//                     the squared cosine reduces to
//                         z_i = |sum_j conj(p_j) sigma_j a_j|^2
//                               / sum_j sigma_j^2 |a_j|^2,
//                     a ~ CN(0, I_r), because a uniform unit w yields
//                     Gaussian subspace coefficients up to a scale that
//                     cancels.  2r slots per codeword.
//
// Streamed scans draw codeword i from slots owned by i alone, so a codebook
// of size 2^(B+1) replays the first 2^B codewords of the smaller book
// exactly (nested prefixes), and results never depend on scan order.

#ifndef MIMOFB_KERNELS_HPP
#define MIMOFB_KERNELS_HPP

#include <armadillo>
#include <cstdint>

namespace mimofb::kernels {

// Resolves a worker-count request: values >= 1 are taken literally, 0 means
// "use the OpenMP default".
int resolve_workers(int workers);

// ---------------------------------------------------------------------
// Materialized codebook scan
// ---------------------------------------------------------------------

struct ScanResult {
    std::uint64_t index = 0; // winning column (lowest index on ties)
    double score = 0.0;      // |x^H c|^2 at the winner
};

// |x^H c|^2 for one column; shared by both scan variants (kept out of line
// so the two loops cannot compile to different floating-point schedules).
double column_score(const std::complex<double> *column, const std::complex<double> *x,
                    arma::uword n);

ScanResult scan_columns_serial(const arma::cx_mat &codewords, const arma::cx_vec &x);
ScanResult scan_columns_parallel(const arma::cx_mat &codewords, const arma::cx_vec &x,
                                 int workers = 0);

// ---------------------------------------------------------------------
// Streamed isotropic scan
// ---------------------------------------------------------------------

struct StreamedBest {
    std::uint64_t index = 0; // winning codeword
    double z = 0.0;          // squared cosine of the winner
};

// Scans `count` codewords in dimension `dim`.  dim == 1 is the degenerate
// direction-free case: every codeword matches exactly (z = 1, index 0).
StreamedBest scan_isotropic_serial(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t count, arma::uword dim);
StreamedBest scan_isotropic_parallel(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t count, arma::uword dim, int workers = 0);

// Coefficients of the winning isotropic codeword relative to the reference
// direction p (unit vector):  a = e^{i theta} sqrt(z) p + sqrt(1-z) q with q
// a uniform unit vector orthogonal to p, both drawn from the reconstruction
// stream.  Conditioned on z this is exactly the law of the winner, because
// an isotropic unit vector decomposes into an independent phase, cosine and
// orthogonal direction.
arma::cx_vec isotropic_winner(const arma::cx_vec &p, double z, std::uint64_t seed,
                              std::uint64_t stream);

// ---------------------------------------------------------------------
// Streamed ellipse scan (general eigenvalue profile)
// ---------------------------------------------------------------------

struct EllipseBest {
    std::uint64_t index = 0;
    double z = 0.0;
    arma::cx_vec coeffs; // the winner's raw CN(0, I_r) draw a
};

// sigma: the r singular values; p: subspace coefficients of the channel
// direction (unit up to rounding).
EllipseBest scan_ellipse_serial(std::uint64_t seed, std::uint64_t stream, std::uint64_t count,
                                const arma::vec &sigma, const arma::cx_vec &p);
EllipseBest scan_ellipse_parallel(std::uint64_t seed, std::uint64_t stream, std::uint64_t count,
                                  const arma::vec &sigma, const arma::cx_vec &p,
                                  int workers = 0);

} // namespace mimofb::kernels

#endif // MIMOFB_KERNELS_HPP
