#include <doctest.h>

#include <random>

#include "morphis/base_case.hpp"
#include "morphis/flat.hpp"
#include "morphis/io.hpp"
#include "test_support.hpp"

using namespace morphis;
using namespace morphis::test;

TEST_CASE("varint encoding") {
    struct Case {
        std::uint64_t value;
        std::vector<std::uint8_t> bytes;
    };
    const std::vector<Case> cases = {
        {0, {0x00}},
        {1, {0x01}},
        {127, {0x7f}},
        {128, {0x80, 0x01}},
        {300, {0xac, 0x02}},
        {16384, {0x80, 0x80, 0x01}},
        {~std::uint64_t{0}, {0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0x01}},
    };
    for (const auto& c : cases) {
        ByteWriter w;
        w.varint(c.value);
        CHECK(w.buffer() == c.bytes);
        CHECK(varint_size(c.value) == c.bytes.size());
        ByteReader r(c.bytes);
        CHECK(r.varint() == c.value);
        CHECK(r.at_end());
    }
}

TEST_CASE("fixed width integers are little endian") {
    ByteWriter w;
    w.u16(0x1234);
    w.u64(0x0102030405060708ULL);
    CHECK(w.buffer() == std::vector<std::uint8_t>{0x34, 0x12, 8, 7, 6, 5, 4, 3, 2, 1});
    ByteReader r(w.buffer());
    CHECK(r.u16() == 0x1234);
    CHECK(r.u64() == 0x0102030405060708ULL);
}

TEST_CASE("reader errors carry absolute offsets") {
    const std::vector<std::uint8_t> data = {0x80, 0x80};
    ByteReader r(data, 100);
    try {
        (void)r.varint();
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 102);
    }
    const std::vector<std::uint8_t> long_varint(11, 0x80);
    ByteReader r2(long_varint);
    CHECK_THROWS_AS((void)r2.varint(), ParseError);
    const std::vector<std::uint8_t> overflow = {0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0x02};
    ByteReader r3(overflow);
    CHECK_THROWS_AS((void)r3.varint(), ParseError);
}

TEST_CASE("bit vectors are packed LSB first and padding must be zero") {
    ByteWriter w;
    w.bits(BitVector{1, 0, 1, 1, 0, 0, 0, 0, 1});
    CHECK(w.buffer() == std::vector<std::uint8_t>{0x0d, 0x01});
    ByteReader r(w.buffer());
    CHECK(r.bits(9) == BitVector({1, 0, 1, 1, 0, 0, 0, 0, 1}));

    const std::vector<std::uint8_t> dirty = {0x0d, 0x03};
    ByteReader r2(dirty);
    CHECK_THROWS_AS((void)r2.bits(9), ParseError);
}

TEST_CASE("bit writer and reader") {
    std::mt19937_64 rng(71);
    BitWriter w;
    std::vector<std::pair<std::uint64_t, unsigned>> fields;
    for (int i = 0; i < 500; ++i) {
        const unsigned width = static_cast<unsigned>(rng() % 65);
        const std::uint64_t value = width == 64 ? rng() : rng() & ((std::uint64_t{1} << width) - 1);
        fields.emplace_back(value, width);
        w.put(value, width);
    }
    const auto bytes = w.bytes();
    CHECK(bytes.size() == (w.bit_size() + 7) / 8);
    BitReader r(bytes, 0);
    for (const auto& [value, width] : fields) {
        CHECK(r.get(width) == value);
    }
    BitReader empty({}, 5);
    CHECK_THROWS_AS((void)empty.get(1), ParseError);
}

TEST_CASE("container header validation") {
    const std::vector<std::uint8_t> payload = {1, 2, 3};
    const auto c = write_container(SectionTag::kColoring, payload);
    REQUIRE(c.size() == kContainerHeaderBytes + 3);
    CHECK(std::equal(c.begin(), c.begin() + 4, "MPH1"));
    const auto s = read_container(c);
    CHECK(s.tag == SectionTag::kColoring);
    CHECK(s.payload_offset == 15);
    CHECK(std::vector<std::uint8_t>(s.payload.begin(), s.payload.end()) == payload);

    auto check_offset = [](std::vector<std::uint8_t> bytes, std::size_t offset) {
        try {
            (void)read_container(bytes);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.offset() == offset);
        }
    };
    auto bad = c;
    bad[0] = 'X';
    check_offset(bad, 0);
    bad = c;
    bad[4] = 2;
    check_offset(bad, 4);
    bad = c;
    bad[6] = 9;
    check_offset(bad, 6);
    bad = c;
    bad.pop_back();
    check_offset(bad, 7);
    check_offset({'M', 'P', 'H'}, 0);
}

TEST_CASE("truncated structures are rejected, never misread") {
    std::mt19937_64 rng(72);
    const auto keys = random_keys(rng, 600);
    FlatConfig cfg;
    cfg.base_n = 16;
    cfg.b = 13;
    const auto bytes = serialize_flat(build_flat(keys, cfg));
    for (std::size_t cut = 0; cut < bytes.size(); cut += 7) {
        std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<long>(cut));
        CHECK_THROWS_AS((void)deserialize_flat(part), ParseError);
    }
    BaseCaseConfig bc;
    bc.n = 12;
    bc.b = 10;
    const auto base = serialize_base(construct_base(random_keys(rng, 12), bc).mphf);
    for (std::size_t cut = 0; cut < base.size(); ++cut) {
        std::vector<std::uint8_t> part(base.begin(), base.begin() + static_cast<long>(cut));
        CHECK_THROWS_AS((void)deserialize_base(part), ParseError);
    }
    CHECK_THROWS_AS((void)deserialize_flat(base), ParseError);
}

TEST_CASE("frozen base case container layout") {
    BaseCaseMphf m;
    m.variant = Variant::kBipartite;
    m.n = 4;
    m.b = 3;
    m.seed0 = 2;
    m.seed1 = 1;
    m.x = BitVector{1, 0, 1};
    const auto bytes = serialize_base(m);
    const std::vector<std::uint8_t> expected = {
        'M', 'P', 'H', '1', 1, 0, 1,  // magic, version 1, tag 1
        5, 0, 0, 0, 0, 0, 0, 0,       // payload length
        1,                            // variant
        4, 3,                         // n, b
        2,                            // seed code 2*1/2 + 1
        0x05,                         // x
    };
    CHECK(bytes == expected);
    CHECK(deserialize_base(bytes) == m);
}
