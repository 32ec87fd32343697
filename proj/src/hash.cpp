#include "morphis/hash.hpp"

#include <cstring>
#include <stdexcept>

namespace morphis {

namespace {

std::uint64_t load_le(const std::byte* p, std::size_t len) noexcept {
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < len; ++i) {
        w |= static_cast<std::uint64_t>(std::to_integer<std::uint8_t>(p[i])) << (8 * i);
    }
    return w;
}

}  // namespace

KeyHash master_hash(std::span<const std::byte> key) noexcept {
    const std::uint64_t len = key.size();
    std::uint64_t lo = 0x9e3779b97f4a7c15 ^ len;
    std::uint64_t hi = 0xc2b2ae3d27d4eb4f ^ (len * 0xff51afd7ed558ccd);
    for (std::size_t off = 0; off < key.size(); off += 8) {
        const std::size_t chunk = key.size() - off < 8 ? key.size() - off : 8;
        const std::uint64_t w = load_le(key.data() + off, chunk);
        lo = mix64(lo ^ w);
        hi = mix64(hi ^ std::rotl(w, 32) ^ lo);
    }
    lo = mix64(lo ^ std::rotl(hi, 17));
    hi = mix64(hi ^ lo);
    return {hi, lo};
}

KeyHash master_hash(std::string_view key) noexcept {
    return master_hash(std::as_bytes(std::span(key.data(), key.size())));
}

KeyHash master_hash(std::uint64_t id) noexcept {
    std::byte buf[8];
    for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<std::byte>(id >> (8 * i));
    }
    return master_hash(std::span<const std::byte>(buf, 8));
}

std::uint64_t candidate(const KeyHash& kh, std::uint64_t seed, unsigned which, std::uint64_t n,
                        Variant variant) {
    if (n == 0 || which > 1) {
        throw std::invalid_argument("candidate: n must be >= 1 and which in {0, 1}");
    }
    if (variant == Variant::kPlain) {
        const Stream s = which == 0 ? Stream::kCandidate0 : Stream::kCandidate1;
        return reduce(derive(kh, seed, s), n);
    }
    if (n % 2 != 0) {
        throw std::invalid_argument("candidate: bipartite variant requires even n");
    }
    const std::uint64_t half = n / 2;
    return which * half + half_position(kh, seed, half);
}

BitVector retrieval_row(const KeyHash& kh, std::uint64_t seed, std::size_t b) {
    const std::uint64_t key = seed_key(seed, Stream::kRetrieval);
    std::uint64_t words[16];
    const std::size_t nw = words_for_bits(b);
    if (nw <= 16) {
        for (std::size_t w = 0; w < nw; ++w) {
            words[w] = derive_keyed(kh, key, w);
        }
        return BitVector::from_words(b, std::span<const std::uint64_t>(words, nw));
    }
    std::vector<std::uint64_t> big(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        big[w] = derive_keyed(kh, key, w);
    }
    return BitVector::from_words(b, big);
}

PrimeFieldVector retrieval_row_fp(const KeyHash& kh, std::uint64_t seed, std::size_t b,
                                  const PrimeField& field) {
    const std::uint64_t key = seed_key(seed, Stream::kFieldRow);
    std::vector<std::uint64_t> entries(b);
    for (std::size_t t = 0; t < b; ++t) {
        entries[t] = reduce(derive_keyed(kh, key, t), field.modulus());
    }
    return PrimeFieldVector(field, std::move(entries));
}

std::uint64_t bucket_assign(const KeyHash& kh, std::uint64_t num_buckets, std::uint64_t layer) {
    if (num_buckets == 0) {
        throw std::invalid_argument("bucket_assign: num_buckets must be >= 1");
    }
    return reduce(derive(kh, layer, Stream::kBucket), num_buckets);
}

std::uint16_t threshold_value(const KeyHash& kh, std::uint64_t layer) noexcept {
    return static_cast<std::uint16_t>(derive(kh, layer, Stream::kThreshold) >> 48);
}

}  // namespace morphis
