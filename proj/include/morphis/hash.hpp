#pragma once

// Seedable hash derivations used by every structure in the library.
//
// Layout (part of the serialized-format contract):
//
//   mix64(x)      x ^= x >> 30; x *= 0xbf58476d1ce4e5b9;
//                 x ^= x >> 27; x *= 0x94d049bb133111eb; x ^= x >> 31
//
//   master_hash   lo = 0x9e3779b97f4a7c15 ^ len, hi = 0xc2b2ae3d27d4eb4f ^ (len * 0xff51afd7ed558ccd)
//                 per 8-byte little-endian block w (last block zero padded):
//                   lo = mix64(lo ^ w); hi = mix64(hi ^ rotl(w, 32) ^ lo)
//                 finally lo = mix64(lo ^ rotl(hi, 17)); hi = mix64(hi ^ lo)
//
//   derive        key = mix64(seed ^ stream)                    (per seed, per stream)
//                 r   = mix64(kh.lo ^ mix64(kh.hi ^ key ^ counter * 0x9e3779b97f4a7c15))
//
//   reduce(r, n)  high 64 bits of the 128-bit product r * n
//
// Stream constants are listed in `Stream`.

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "morphis/gf2.hpp"
#include "morphis/gfp.hpp"

namespace morphis {

/// 128-bit master hash of a key. All derived hashes read only this value.
struct KeyHash {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    friend auto operator<=>(const KeyHash&, const KeyHash&) = default;
};

enum class Variant : std::uint8_t { kPlain = 0, kBipartite = 1 };

enum class Stream : std::uint64_t {
    kCandidate0 = 0x243f6a8885a308d3,
    kCandidate1 = 0x13198a2e03707344,
    kBipartite = 0xa4093822299f31d0,
    kRetrieval = 0x082efa98ec4e6c89,
    kBucket = 0x452821e638d01377,
    kThreshold = 0xbe5466cf34e90c6c,
    kFieldRow = 0xc0ac29b7c97c50dd,
    kPairSeed = 0x3f84d5b5b5470917,
};

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15;

[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9;
    x ^= x >> 27;
    x *= 0x94d049bb133111eb;
    x ^= x >> 31;
    return x;
}

[[nodiscard]] constexpr std::uint64_t reduce(std::uint64_t r, std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * n) >> 64);
}

[[nodiscard]] KeyHash master_hash(std::span<const std::byte> key) noexcept;
[[nodiscard]] KeyHash master_hash(std::string_view key) noexcept;
/// Hash of the 8-byte little-endian encoding of an integer id.
[[nodiscard]] KeyHash master_hash(std::uint64_t id) noexcept;

/// Seed- and stream-dependent part of a derivation; hoisted out of per-key loops.
[[nodiscard]] constexpr std::uint64_t seed_key(std::uint64_t seed, Stream stream) noexcept {
    return mix64(seed ^ static_cast<std::uint64_t>(stream));
}

[[nodiscard]] constexpr std::uint64_t derive_keyed(const KeyHash& kh, std::uint64_t key,
                                                   std::uint64_t counter = 0) noexcept {
    return mix64(kh.lo ^ mix64(kh.hi ^ key ^ (counter * kGolden)));
}

[[nodiscard]] constexpr std::uint64_t derive(const KeyHash& kh, std::uint64_t seed, Stream stream,
                                             std::uint64_t counter = 0) noexcept {
    return derive_keyed(kh, seed_key(seed, stream), counter);
}

/// Position in [0, n/2) drawn for a key under one bipartite seed. Both sides
/// use the same draw; the right side adds n/2.
[[nodiscard]] constexpr std::uint64_t half_position(const KeyHash& kh, std::uint64_t seed,
                                                    std::uint64_t half) noexcept {
    return reduce(derive(kh, seed, Stream::kBipartite), half);
}

/// Candidate position h_{seed,which}(kh) in [0, n).
///
/// Plain: `which` selects one of two independent streams over [0, n).
/// Bipartite: which = 0 maps into [0, n/2), which = 1 into [n/2, n), and the
/// seed is that side's own seed. Requires n >= 1 (and n even for bipartite).
[[nodiscard]] std::uint64_t candidate(const KeyHash& kh, std::uint64_t seed, unsigned which,
                                      std::uint64_t n, Variant variant);

/// Counter-mode row h'_seed(kh) with b bits; word w is derive(kh, seed, kRetrieval, w).
/// The row for b is always a prefix of the row for any larger b.
[[nodiscard]] BitVector retrieval_row(const KeyHash& kh, std::uint64_t seed, std::size_t b);

/// Counter-mode row over F_p; entry t is reduce(derive(kh, seed, kFieldRow, t), p).
[[nodiscard]] PrimeFieldVector retrieval_row_fp(const KeyHash& kh, std::uint64_t seed,
                                                std::size_t b, const PrimeField& field);

/// Retrieval seed for a bipartite seed pair.
[[nodiscard]] constexpr std::uint64_t pair_seed(std::uint64_t s0, std::uint64_t s1) noexcept {
    return mix64(mix64(s0 ^ static_cast<std::uint64_t>(Stream::kPairSeed)) + s1);
}

[[nodiscard]] std::uint64_t bucket_assign(const KeyHash& kh, std::uint64_t num_buckets,
                                          std::uint64_t layer = 0);

[[nodiscard]] std::uint16_t threshold_value(const KeyHash& kh, std::uint64_t layer = 0) noexcept;

}  // namespace morphis
