#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "morphis/base_case.hpp"
#include "morphis/hash.hpp"

namespace morphis {

/// Partitioned construction over an arbitrary number of keys.
///
/// Keys are hashed into buckets of expected size base_n * bucket_load. Each
/// bucket keeps the keys whose 16-bit threshold value is below the bucket's
/// stored threshold, chosen so that at most base_n keys stay (and an even
/// number for the bipartite variant). Bumped keys move on to the next layer,
/// which hashes them into a fresh, smaller set of buckets. Keys still left
/// after max_layers are kept verbatim in a sorted fallback list.
struct FlatConfig {
    std::size_t base_n = 64;
    /// Retrieval bits for a full bucket; a bucket with m keys stores
    /// max(0, m - (base_n - b)) bits, at least 1 for the bipartite variant.
    std::size_t b = 62;
    double bucket_load = 1.1;
    std::size_t max_layers = 8;
    Variant variant = Variant::kBipartite;
    std::uint64_t max_seeds = std::uint64_t{1} << 24;
    unsigned threads = 1;

    void validate() const;
    [[nodiscard]] std::size_t bucket_bits(std::size_t m) const noexcept {
        const std::size_t slack = base_n - b;
        const std::size_t floor = variant == Variant::kBipartite && m != 0 ? 1 : 0;
        return std::max(floor, m > slack ? m - slack : 0);
    }
};

struct FlatLayer {
    std::uint64_t bucket_count = 0;
    /// A key stays in its bucket iff threshold_value(key, layer) < threshold.
    std::vector<std::uint16_t> thresholds;
    /// First output position of each bucket.
    std::vector<std::uint64_t> offsets;
    /// One per bucket; n == 0 marks an empty bucket.
    std::vector<BaseCaseMphf> base_cases;
};

struct FlatMphf {
    std::size_t base_n = 0;
    std::size_t b = 0;
    Variant variant = Variant::kBipartite;
    std::uint64_t num_keys = 0;
    std::vector<FlatLayer> layers;
    /// Sorted; fallback[i] maps to fallback_offset + i.
    std::vector<KeyHash> fallback;
    std::uint64_t fallback_offset = 0;
};

struct BucketStats {
    std::uint32_t layer = 0;
    std::uint64_t bucket = 0;
    std::size_t size = 0;
    std::size_t b = 0;
    SearchStats stats;
};

/// Construction-time record, indexed like the input keys. key_layer equals
/// layers.size() for fallback keys.
struct FlatBuildReport {
    std::vector<BucketStats> buckets;
    std::vector<std::uint32_t> key_layer;
    std::vector<std::uint64_t> key_bucket;
    std::vector<std::uint64_t> key_position;
};

/// Throws DuplicateKeyError, std::invalid_argument, or ConstructionError
/// (message prefixed with the failing layer and bucket).
[[nodiscard]] FlatMphf build_flat(std::span<const KeyHash> keys, const FlatConfig& cfg,
                                  FlatBuildReport* report = nullptr);

[[nodiscard]] std::uint64_t query_flat(const FlatMphf& m, const KeyHash& kh);

/// Sizes in bits of each part of the serialized form.
struct SpaceReport {
    std::uint64_t num_keys = 0;
    std::uint64_t seed_bits = 0;
    std::uint64_t x_bits = 0;
    std::uint64_t threshold_bits = 0;
    std::uint64_t offset_bits = 0;
    std::uint64_t fallback_bits = 0;
    /// Container header, config varints, layer headers and byte padding.
    std::uint64_t metadata_bits = 0;
    std::uint64_t total_bits = 0;

    [[nodiscard]] double per_key(std::uint64_t bits) const noexcept {
        return num_keys == 0 ? 0.0 : static_cast<double>(bits) / static_cast<double>(num_keys);
    }
    [[nodiscard]] std::string to_string() const;
};

[[nodiscard]] SpaceReport space_report(const FlatMphf& m);
/// Same accounting for a single base case container.
[[nodiscard]] SpaceReport space_report(const BaseCaseMphf& m);

[[nodiscard]] std::vector<std::uint8_t> serialize_flat(const FlatMphf& m);
[[nodiscard]] FlatMphf deserialize_flat(std::span<const std::uint8_t> bytes);

}  // namespace morphis
