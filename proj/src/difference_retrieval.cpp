#include <bit>

#include "morphis/appendix.hpp"
#include "morphis/io.hpp"
#include "morphis/pseudoforest.hpp"

namespace morphis {

unsigned DifferenceRetrieval::digit_width() const noexcept {
    return static_cast<unsigned>(std::bit_width(p - 1));
}

DifferenceRetrieval build_difference_retrieval(std::span<const KeyHash> keys,
                                               std::span<const std::uint64_t> f, std::uint64_t p,
                                               std::uint64_t first_seed, std::size_t retry_cap) {
    const PrimeField field(p);
    if (keys.size() != f.size()) {
        throw std::invalid_argument("difference retrieval: one value per key required");
    }
    if (keys.empty()) {
        throw std::invalid_argument("difference retrieval: no keys");
    }
    for (auto v : f) {
        if (v >= p) {
            throw std::invalid_argument("difference retrieval: value out of [0, p)");
        }
    }
    check_distinct(keys);

    DifferenceRetrieval d;
    d.p = p;
    d.n = keys.size();
    d.b = keys.size() - 1;
    PrimeFieldVector rhs(field, d.b);
    for (std::size_t i = 0; i < d.b; ++i) {
        rhs.set(i, field.sub(f[i], f[i + 1]));
    }
    for (std::size_t attempt = 0; attempt < retry_cap; ++attempt) {
        const std::uint64_t seed = first_seed + attempt;
        std::vector<PrimeFieldVector> rows;
        rows.reserve(keys.size());
        for (const auto& kh : keys) {
            rows.push_back(retrieval_row_fp(kh, seed, d.b, field));
        }
        PrimeFieldMatrix a(field, d.b, d.b);
        for (std::size_t i = 0; i < d.b; ++i) {
            for (std::size_t t = 0; t < d.b; ++t) {
                a.set(i, t, field.sub(rows[i][t], rows[i + 1][t]));
            }
        }
        if (auto x = gfp_solve(a, rhs)) {
            d.h_seed = seed;
            d.x.assign(x->entries().begin(), x->entries().end());
            d.retries = attempt;
            return d;
        }
    }
    throw RetryLimitError("difference retrieval: no solution after " + std::to_string(retry_cap) +
                              " seeds",
                          retry_cap);
}

std::uint64_t query_diff(const DifferenceRetrieval& d, const KeyHash& a, const KeyHash& b) {
    const PrimeField field(d.p);
    const auto ra = retrieval_row_fp(a, d.h_seed, d.b, field);
    const auto rb = retrieval_row_fp(b, d.h_seed, d.b, field);
    std::uint64_t acc = 0;
    for (std::size_t t = 0; t < d.b; ++t) {
        acc = field.add(acc, field.mul(field.sub(ra[t], rb[t]), d.x[t]));
    }
    return acc;
}

// Payload: varint p, varint n, varint h_seed, then n - 1 digits of
// ceil(log2 p) bits each, packed and byte padded.
std::vector<std::uint8_t> serialize_difference(const DifferenceRetrieval& d) {
    ByteWriter w;
    w.varint(d.p);
    w.varint(d.n);
    w.varint(d.h_seed);
    BitWriter digits;
    for (auto v : d.x) {
        digits.put(v, d.digit_width());
    }
    w.bytes(digits.bytes());
    return write_container(SectionTag::kDifferenceRetrieval, w.buffer());
}

DifferenceRetrieval deserialize_difference(std::span<const std::uint8_t> bytes) {
    const Section section = read_container(bytes);
    if (section.tag != SectionTag::kDifferenceRetrieval) {
        throw ParseError(6, "expected a difference retrieval section");
    }
    ByteReader r(section.payload, section.payload_offset);
    DifferenceRetrieval d;
    const std::size_t p_at = r.absolute();
    d.p = r.varint();
    if (!is_prime(d.p)) {
        throw ParseError(p_at, "modulus is not prime");
    }
    const std::size_t n_at = r.absolute();
    d.n = r.varint();
    if (d.n == 0) {
        throw ParseError(n_at, "empty key set");
    }
    d.b = d.n - 1;
    d.h_seed = r.varint();
    const std::size_t digits_at = r.absolute();
    BitReader digits(r.bytes((d.b * d.digit_width() + 7) / 8), digits_at);
    d.x.resize(d.b);
    for (auto& v : d.x) {
        v = digits.get(d.digit_width());
        if (v >= d.p) {
            throw ParseError(digits_at, "digit out of range");
        }
    }
    if (!r.at_end()) {
        r.fail("trailing bytes after difference retrieval");
    }
    return d;
}

}  // namespace morphis
