#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>

#include "morphis/hash.hpp"
#include "test_support.hpp"

using namespace morphis;
using namespace morphis::test;

// Expected digests come from an independent re-implementation of the
// documented layout, not from this library.
TEST_CASE("frozen master hash digests") {
    const auto empty = master_hash(std::string_view(""));
    CHECK(empty.hi == 0x9999612a67dc30f1ULL);
    CHECK(empty.lo == 0x259a2e22fb9c62d8ULL);

    const auto abc = master_hash(std::string_view("abc"));
    CHECK(abc.hi == 0x8e4aaa13425fce16ULL);
    CHECK(abc.lo == 0xe416134252496f1eULL);

    const auto two_blocks = master_hash(std::string_view("0123456789abcdef!"));
    CHECK(two_blocks.hi == 0x3de6fd0d5a7b66a9ULL);
    CHECK(two_blocks.lo == 0xfaa5453ae2e0def1ULL);

    const auto id = master_hash(std::uint64_t{42});
    CHECK(id.hi == 0x2d375513a38bd1c7ULL);
    CHECK(id.lo == 0x82ef3a1019151076ULL);
}

TEST_CASE("mixer is the splitmix64 finalizer") {
    // First splitmix64 output for state 0.
    CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0xe220a8397b1dcdafULL);
    CHECK(mix64(0) == 0);
    CHECK(mix64(1) == 0x5692161d100b05e5ULL);
}

TEST_CASE("frozen derived positions") {
    const auto abc = master_hash(std::string_view("abc"));
    CHECK(candidate(abc, 7, 0, 100, Variant::kPlain) == 48);
    CHECK(candidate(abc, 7, 0, 100, Variant::kBipartite) == 9);
    CHECK(candidate(abc, 7, 1, 100, Variant::kBipartite) == 59);
    CHECK(retrieval_row(abc, 3, 10) == BitVector({0, 0, 0, 1, 1, 0, 0, 0, 1, 1}));
}

TEST_CASE("trailing zero bytes change the hash") {
    const std::byte a[] = {std::byte{1}};
    const std::byte b[] = {std::byte{1}, std::byte{0}};
    CHECK(master_hash(std::span<const std::byte>(a)) != master_hash(std::span<const std::byte>(b)));
}

TEST_CASE("reduce maps into range") {
    CHECK(reduce(0, 10) == 0);
    CHECK(reduce(~std::uint64_t{0}, 10) == 9);
    CHECK(reduce(std::uint64_t{1} << 63, 10) == 5);
}

TEST_CASE("candidates stay in their ranges") {
    std::mt19937_64 rng(31);
    const auto keys = random_keys(rng, 500);
    for (const auto& k : keys) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            CHECK(candidate(k, seed, 0, 37, Variant::kPlain) < 37);
            CHECK(candidate(k, seed, 1, 37, Variant::kPlain) < 37);
            CHECK(candidate(k, seed, 0, 40, Variant::kBipartite) < 20);
            const auto r = candidate(k, seed, 1, 40, Variant::kBipartite);
            CHECK(r >= 20);
            CHECK(r < 40);
        }
    }
    CHECK_THROWS_AS((void)candidate(keys[0], 0, 0, 0, Variant::kPlain), std::invalid_argument);
    CHECK_THROWS_AS((void)candidate(keys[0], 0, 0, 7, Variant::kBipartite), std::invalid_argument);
    CHECK_THROWS_AS((void)candidate(keys[0], 0, 2, 8, Variant::kPlain), std::invalid_argument);
}

TEST_CASE("candidate distribution is close to uniform") {
    std::mt19937_64 rng(32);
    const auto keys = random_keys(rng, 20000);
    std::vector<int> hist(10, 0);
    for (const auto& k : keys) {
        ++hist[candidate(k, 1, 1, 10, Variant::kPlain)];
    }
    double chi2 = 0;
    for (int h : hist) {
        chi2 += (h - 2000.0) * (h - 2000.0) / 2000.0;
    }
    CHECK(chi2 < 30.0);  // 9 degrees of freedom, p < 0.001
}

TEST_CASE("retrieval rows are nested prefixes") {
    std::mt19937_64 rng(33);
    const auto keys = random_keys(rng, 50);
    for (const auto& k : keys) {
        const auto full = retrieval_row(k, 9, 200);
        for (std::size_t b : {0u, 1u, 63u, 64u, 65u, 130u}) {
            const auto part = retrieval_row(k, 9, b);
            REQUIRE(part.size() == b);
            for (std::size_t i = 0; i < b; ++i) {
                CHECK(part.get(i) == full.get(i));
            }
        }
    }
}

TEST_CASE("field rows are in range and seed dependent") {
    const PrimeField f(11);
    const auto k = master_hash(std::string_view("key"));
    const auto r1 = retrieval_row_fp(k, 1, 30, f);
    const auto r2 = retrieval_row_fp(k, 2, 30, f);
    for (std::size_t i = 0; i < 30; ++i) {
        CHECK(r1[i] < 11);
    }
    CHECK_FALSE(r1 == r2);
    const auto prefix = retrieval_row_fp(k, 1, 7, f);
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(prefix[i] == r1[i]);
    }
}

TEST_CASE("bucket and threshold values") {
    std::mt19937_64 rng(34);
    const auto keys = random_keys(rng, 1000);
    std::set<std::uint16_t> thresholds;
    for (const auto& k : keys) {
        CHECK(bucket_assign(k, 17) < 17);
        CHECK(bucket_assign(k, 1) == 0);
        thresholds.insert(threshold_value(k));
    }
    CHECK(thresholds.size() > 980);
    int moved = 0;
    for (const auto& k : keys) {
        moved += bucket_assign(k, 1000, 0) != bucket_assign(k, 1000, 1) ? 1 : 0;
    }
    CHECK(moved > 950);
    CHECK_THROWS_AS((void)bucket_assign(keys[0], 0), std::invalid_argument);
}

TEST_CASE("pair seeds separate ordered pairs") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 40; ++i) {
        for (std::uint64_t j = 0; j < 40; ++j) {
            seen.insert(pair_seed(i, j));
        }
    }
    CHECK(seen.size() == 1600);
}
