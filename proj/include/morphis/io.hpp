#pragma once

// Container format
//
//   offset  size  field
//   0       4     magic "MPH1"
//   4       2     version (u16 LE), currently 1
//   6       1     section tag: 1 base case, 2 flat, 3 coloring, 4 difference retrieval
//   7       8     payload length (u64 LE)
//   15      len   payload
//
// Integers are little-endian, seeds and counts are unsigned LEB128 varints,
// bit vectors are packed LSB-first into ceil(bits / 8) bytes.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "morphis/gf2.hpp"

namespace morphis {

enum class SectionTag : std::uint8_t {
    kBaseCase = 1,
    kFlat = 2,
    kColoring = 3,
    kDifferenceRetrieval = 4,
};

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kContainerHeaderBytes = 15;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : std::runtime_error("parse error at byte " + std::to_string(offset) + ": " + what),
          offset_(offset) {}
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

[[nodiscard]] std::size_t varint_size(std::uint64_t value) noexcept;

class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v);
    void u64(std::uint64_t v);
    void varint(std::uint64_t v);
    void bytes(std::span<const std::uint8_t> data);
    /// ceil(bits.size() / 8) bytes, LSB-first.
    void bits(const BitVector& bits);

    [[nodiscard]] std::size_t size() const noexcept { return buf_.size(); }
    [[nodiscard]] const std::vector<std::uint8_t>& buffer() const noexcept { return buf_; }
    [[nodiscard]] std::vector<std::uint8_t> take() && { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

/// Bounds-checked reader; every failure throws ParseError with the absolute offset.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data, std::size_t base_offset = 0)
        : data_(data), base_(base_offset) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint64_t u64();
    std::uint64_t varint();
    std::span<const std::uint8_t> bytes(std::size_t count);
    BitVector bits(std::size_t count);

    [[nodiscard]] std::size_t position() const noexcept { return pos_; }
    [[nodiscard]] std::size_t absolute() const noexcept { return base_ + pos_; }
    [[nodiscard]] bool at_end() const noexcept { return pos_ == data_.size(); }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(absolute(), what); }

private:
    void need(std::size_t count, const char* what) const;

    std::span<const std::uint8_t> data_;
    std::size_t base_;
    std::size_t pos_ = 0;
};

/// Appends fixed-width fields to a packed LSB-first bit stream.
class BitWriter {
public:
    void put(std::uint64_t value, unsigned width);
    void put_bits(const BitVector& bits);
    [[nodiscard]] std::size_t bit_size() const noexcept { return bits_; }
    /// Packed bytes, zero padded to a whole byte.
    [[nodiscard]] std::vector<std::uint8_t> bytes() const;

private:
    std::vector<std::uint64_t> words_;
    std::size_t bits_ = 0;
};

class BitReader {
public:
    BitReader(std::span<const std::uint8_t> bytes, std::size_t base_offset)
        : bytes_(bytes), base_(base_offset) {}
    std::uint64_t get(unsigned width);
    BitVector get_bits(std::size_t count);

private:
    bool next_bit();

    std::span<const std::uint8_t> bytes_;
    std::size_t base_;
    std::size_t pos_ = 0;
};

struct Section {
    SectionTag tag;
    std::span<const std::uint8_t> payload;
    std::size_t payload_offset;
};

[[nodiscard]] std::vector<std::uint8_t> write_container(SectionTag tag,
                                                        std::span<const std::uint8_t> payload);
[[nodiscard]] Section read_container(std::span<const std::uint8_t> bytes);

}  // namespace morphis
