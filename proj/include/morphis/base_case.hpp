#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "morphis/gf2.hpp"
#include "morphis/hash.hpp"
#include "morphis/io.hpp"

namespace morphis {

struct BaseCaseConfig {
    std::size_t n = 0;
    /// Retrieval bits stored for the orientation; b <= n.
    std::size_t b = 0;
    Variant variant = Variant::kBipartite;
    /// Cutoff on raw seeds drawn (per side for bipartite, which shares one sequence).
    std::uint64_t max_seeds = std::uint64_t{1} << 24;
    /// Bipartite only: cutoff on seed pairs tested.
    std::uint64_t max_pairs = std::uint64_t{1} << 34;

    /// Throws std::invalid_argument for n == 0, b > n, odd bipartite n,
    /// bipartite b == 0, n >= 2^31 or max_seeds >= 2^32.
    void validate() const;
};

/// Counters of one seed search. For bipartite searches the seeds form one
/// shared sequence 0, 1, 2, ...; a seed that passes the surjectivity filter is
/// paired as the left seed with every earlier admitted seed as the right seed.
struct SearchStats {
    /// Raw seeds drawn (plain: graphs sampled).
    std::uint64_t seeds_tested = 0;
    /// Bipartite only: seeds that passed the surjectivity filter.
    std::uint64_t seeds_admitted = 0;
    /// Bipartite only: admitted pairs checked for pseudoforestness.
    std::uint64_t pairs_tested = 0;
    /// Plain: the successful seed. Bipartite: index of the newer seed of the pair.
    std::uint64_t successful_seed = 0;
    /// What gets stored: plain seed, or the triangular rank i(i-1)/2 + j of pair (i, j).
    std::uint64_t seed_code = 0;
    std::uint64_t pseudoforests_found = 0;
    std::uint64_t systems_solved = 0;
    std::uint64_t systems_unsolvable = 0;
    /// Components of the accepted pseudoforest.
    std::size_t components = 0;
    bool success = false;

    [[nodiscard]] std::string to_string() const;
};

class ConstructionError : public std::runtime_error {
public:
    ConstructionError(const std::string& what, SearchStats stats)
        : std::runtime_error(what), stats_(stats) {}
    [[nodiscard]] const SearchStats& stats() const noexcept { return stats_; }

private:
    SearchStats stats_;
};

/// Triangular pairing of bipartite seeds: (i, j) with j < i maps to i(i-1)/2 + j.
[[nodiscard]] constexpr std::uint64_t encode_seed_pair(std::uint64_t i, std::uint64_t j) noexcept {
    return i * (i - 1) / 2 + j;
}
struct SeedPair {
    std::uint64_t left;
    std::uint64_t right;
};
[[nodiscard]] SeedPair decode_seed_pair(std::uint64_t code);

/// One minimal perfect hash function over n keys.
struct BaseCaseMphf {
    Variant variant = Variant::kBipartite;
    std::size_t n = 0;
    std::size_t b = 0;
    /// Plain: the seed. Bipartite: seed of the left half.
    std::uint64_t seed0 = 0;
    /// Bipartite: seed of the right half (seed1 < seed0). Unused for plain.
    std::uint64_t seed1 = 0;
    BitVector x;

    [[nodiscard]] std::uint64_t seed_code() const noexcept {
        return variant == Variant::kPlain ? seed0 : encode_seed_pair(seed0, seed1);
    }
    [[nodiscard]] std::uint64_t retrieval_seed() const noexcept {
        return variant == Variant::kPlain ? seed0 : pair_seed(seed0, seed1);
    }

    friend bool operator==(const BaseCaseMphf&, const BaseCaseMphf&) = default;
};

struct BaseCaseResult {
    BaseCaseMphf mphf;
    SearchStats stats;
};

/// Seed search with the pseudoforest check as a filter, then a solve of
/// A*H*x = d for every pseudoforest found. The result is checked to be a
/// bijection before returning. Throws DuplicateKeyError, std::invalid_argument
/// for bad configs, and ConstructionError when max_seeds is exhausted.
[[nodiscard]] BaseCaseResult construct_base(std::span<const KeyHash> keys, const BaseCaseConfig& cfg);

/// The ShockHash baseline: same seed enumeration, accepts the first
/// pseudoforest without any solve. cfg.b is ignored.
[[nodiscard]] SearchStats shockhash_stats_base(std::span<const KeyHash> keys,
                                               const BaseCaseConfig& cfg);

[[nodiscard]] std::uint64_t query_base(const BaseCaseMphf& m, const KeyHash& kh);

/// Payload: u8 variant, varint n, varint b, varint seed code, ceil(b/8) bytes of x.
void write_base_payload(ByteWriter& w, const BaseCaseMphf& m);
[[nodiscard]] BaseCaseMphf read_base_payload(ByteReader& r);

[[nodiscard]] std::vector<std::uint8_t> serialize_base(const BaseCaseMphf& m);
[[nodiscard]] BaseCaseMphf deserialize_base(std::span<const std::uint8_t> bytes);

}  // namespace morphis
