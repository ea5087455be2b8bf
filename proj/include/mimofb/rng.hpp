// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random number generation.
//
// All randomness in the library flows through the Philox-4x32-10 block
// function.  A draw is addressed by (seed, stream, slot):
//
//   seed    64-bit user-facing seed; becomes the Philox key.
//   stream  64-bit logical stream id; occupies counter words 2..3.  Streams
//           encode (trial, user, role) so that every independent random
//           object in a simulation owns a private stream (see stream_id).
//   slot    index of a 64-bit draw within the stream.  Slot s lives in
//           Philox block s/2 (counter words 0..1); each 128-bit block yields
//           two u64 draws.
//
// Because a draw's value depends only on its address, results are bit
// reproducible for any worker count and any evaluation order, and kernels
// can jump to arbitrary positions in O(1).  Gaussian variates are produced
// by inverting the normal CDF (Wichura's AS 241 double-precision fit), which
// consumes exactly one u64 per variate and therefore keeps the slot
// arithmetic trivial — rejection-style samplers would not.

#ifndef MIMOFB_RNG_HPP
#define MIMOFB_RNG_HPP

#include <armadillo>
#include <array>
#include <complex>
#include <cstdint>

namespace mimofb {

// ---------------------------------------------------------------------
// Philox-4x32-10 block function
// ---------------------------------------------------------------------

namespace detail {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u; // golden-ratio fraction
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u; // sqrt(3)-1 fraction

inline void philox_round(std::array<std::uint32_t, 4> &x,
                         const std::array<std::uint32_t, 2> &k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * x[2];
    x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k[1], static_cast<std::uint32_t>(p0)};
}

} // namespace detail

// Applies 10 Philox rounds to a 128-bit counter under a 64-bit key and
// returns the 128-bit output block.  Inline because the streamed scans spend
// nearly all their time here.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                               std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; round++) {
        detail::philox_round(counter, key);
        key[0] += detail::kPhiloxW0;
        key[1] += detail::kPhiloxW1;
    }
    return counter;
}

// One addressed 64-bit draw (see the file header for the addressing model).
inline std::uint64_t philox_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t slot) {
    const std::uint64_t block = slot >> 1;
    const std::array<std::uint32_t, 4> out = philox4x32(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
         static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const int half = static_cast<int>(slot & 1u) * 2;
    return static_cast<std::uint64_t>(out[half]) |
           (static_cast<std::uint64_t>(out[half + 1]) << 32);
}

// Maps a u64 to the open interval (0,1) with 52-bit resolution.  The
// midpoint offset keeps both endpoints strictly excluded — the largest
// result is 1 - 2^-53, exactly representable — so the value is always a
// valid argument for inverse-CDF transforms.  (A 53-bit mapping would round
// its top value to exactly 1.0.)
inline double u64_to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

// Inverse of the standard normal CDF (Wichura AS 241, double precision,
// |error| < 1e-15 over (0,1)).  Deterministic and branch-bounded, which is
// what makes counter-addressed Gaussian draws possible.
double inverse_normal_cdf(double p);

// Standard normal CDF (via erfc); used by tests and bound evaluations.
double normal_cdf(double x);

// ---------------------------------------------------------------------
// Stream identifiers
// ---------------------------------------------------------------------

// Role of a stream within one (trial, user) cell of a simulation.  Keeping
// roles distinct means adding or removing a scheme never shifts the draws
// seen by the other schemes (common random numbers across schemes).
enum class Role : std::uint32_t {
    correlation = 0,      // eigenbasis draw for the correlation model
    channel = 1,          // white channel vector h_w
    stats_scan = 2,       // statistics-codebook quantization scan
    stats_reconstruct = 3,// winner reconstruction for the reduced-form scan
    rvq_scan = 4,         // RVQ quantization scan
    rvq_reconstruct = 5,  // winner reconstruction for the RVQ scan
    generic = 6,          // module-level default stream
};

// Packs (trial, user, role) into a stream id:  (trial << 24) | (user << 8) | role.
constexpr std::uint64_t stream_id(std::uint64_t trial, std::uint32_t user, Role role) {
    return (trial << 24) | (static_cast<std::uint64_t>(user & 0xFFFFu) << 8) |
           static_cast<std::uint64_t>(role);
}

// Derives an independent child seed, e.g. for a correlation model owned by
// one (trial, user) cell.  Simply the first draw of the addressed stream.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream) {
    return philox_u64(master_seed, stream, 0);
}

// ---------------------------------------------------------------------
// Sequential view over one stream
// ---------------------------------------------------------------------

// Rng hands out consecutive slots of a single (seed, stream) pair.  It is a
// convenience cursor only — no state beyond the next slot index — so copies
// are cheap and seek() is exact.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t slot = 0)
        : seed_(seed), stream_(stream), slot_(slot) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t slot() const { return slot_; }

    void seek(std::uint64_t slot) { slot_ = slot; }

    std::uint64_t next_u64() { return philox_u64(seed_, stream_, slot_++); }

    // Uniform on (0,1).
    double next_unit() { return u64_to_unit(next_u64()); }

    // Standard normal, one slot per variate.
    double next_normal() { return inverse_normal_cdf(next_unit()); }

    // Circularly-symmetric complex Gaussian with unit variance
    // (real and imaginary parts are N(0, 1/2) each); two slots.
    std::complex<double> next_cnormal();

    // Vector of n i.i.d. CN(0,1) entries; 2n slots.
    arma::cx_vec cnormal_vector(arma::uword n);

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t slot_;
};

} // namespace mimofb

#endif // MIMOFB_RNG_HPP
