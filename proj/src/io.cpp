#include "morphis/io.hpp"

#include <algorithm>
#include <cstring>

namespace morphis {

std::size_t varint_size(std::uint64_t value) noexcept {
    std::size_t n = 1;
    while (value >= 0x80) {
        value >>= 7;
        ++n;
    }
    return n;
}

void ByteWriter::u16(std::uint16_t v) {
    buf_.push_back(static_cast<std::uint8_t>(v));
    buf_.push_back(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

void ByteWriter::varint(std::uint64_t v) {
    while (v >= 0x80) {
        buf_.push_back(static_cast<std::uint8_t>(v | 0x80));
        v >>= 7;
    }
    buf_.push_back(static_cast<std::uint8_t>(v));
}

void ByteWriter::bytes(std::span<const std::uint8_t> data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
}

void ByteWriter::bits(const BitVector& bits) {
    const std::size_t nbytes = (bits.size() + 7) / 8;
    const auto words = bits.words();
    for (std::size_t i = 0; i < nbytes; ++i) {
        buf_.push_back(static_cast<std::uint8_t>(words[i / 8] >> (8 * (i % 8))));
    }
}

void ByteReader::need(std::size_t count, const char* what) const {
    if (data_.size() - pos_ < count) {
        fail(std::string("truncated input reading ") + what);
    }
}

std::uint8_t ByteReader::u8() {
    need(1, "u8");
    return data_[pos_++];
}

std::uint16_t ByteReader::u16() {
    need(2, "u16");
    const auto v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
}

std::uint64_t ByteReader::u64() {
    need(8, "u64");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    }
    pos_ += 8;
    return v;
}

std::uint64_t ByteReader::varint() {
    std::uint64_t v = 0;
    for (unsigned shift = 0;; shift += 7) {
        if (shift > 63) {
            fail("varint longer than 10 bytes");
        }
        const std::uint8_t byte = u8();
        const std::uint64_t part = byte & 0x7f;
        if (shift == 63 && part > 1) {
            fail("varint overflows 64 bits");
        }
        v |= part << shift;
        if ((byte & 0x80) == 0) {
            return v;
        }
    }
}

std::span<const std::uint8_t> ByteReader::bytes(std::size_t count) {
    need(count, "byte block");
    auto out = data_.subspan(pos_, count);
    pos_ += count;
    return out;
}

BitVector ByteReader::bits(std::size_t count) {
    const std::size_t nbytes = (count + 7) / 8;
    auto raw = bytes(nbytes);
    std::vector<std::uint64_t> words(words_for_bits(count), 0);
    for (std::size_t i = 0; i < nbytes; ++i) {
        words[i / 8] |= static_cast<std::uint64_t>(raw[i]) << (8 * (i % 8));
    }
    if (count % 8 != 0 && (raw[nbytes - 1] >> (count % 8)) != 0) {
        throw ParseError(absolute() - 1, "nonzero padding bits in bit vector");
    }
    return BitVector::from_words(count, words);
}

void BitWriter::put(std::uint64_t value, unsigned width) {
    for (unsigned i = 0; i < width; ++i) {
        if ((bits_ & 63) == 0) {
            words_.push_back(0);
        }
        words_.back() |= ((value >> i) & 1u) << (bits_ & 63);
        ++bits_;
    }
}

void BitWriter::put_bits(const BitVector& bits) {
    for (std::size_t i = 0; i < bits.size(); ++i) {
        put(bits.get(i) ? 1 : 0, 1);
    }
}

std::vector<std::uint8_t> BitWriter::bytes() const {
    std::vector<std::uint8_t> out((bits_ + 7) / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
    }
    return out;
}

bool BitReader::next_bit() {
    if (pos_ >= bytes_.size() * 8) {
        throw ParseError(base_ + bytes_.size(), "bit stream exhausted");
    }
    const bool bit = (bytes_[pos_ / 8] >> (pos_ % 8)) & 1u;
    ++pos_;
    return bit;
}

std::uint64_t BitReader::get(unsigned width) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) {
        v |= static_cast<std::uint64_t>(next_bit()) << i;
    }
    return v;
}

BitVector BitReader::get_bits(std::size_t count) {
    BitVector v(count);
    for (std::size_t i = 0; i < count; ++i) {
        v.set(i, next_bit());
    }
    return v;
}

std::vector<std::uint8_t> write_container(SectionTag tag, std::span<const std::uint8_t> payload) {
    ByteWriter w;
    w.bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>("MPH1"), 4));
    w.u16(kFormatVersion);
    w.u8(static_cast<std::uint8_t>(tag));
    w.u64(payload.size());
    w.bytes(payload);
    return std::move(w).take();
}

Section read_container(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), "MPH1", 4) != 0) {
        throw ParseError(0, "bad magic, expected MPH1");
    }
    const std::uint16_t version = r.u16();
    if (version != kFormatVersion) {
        throw ParseError(4, "unsupported version " + std::to_string(version));
    }
    const std::uint8_t tag = r.u8();
    if (tag < 1 || tag > 4) {
        throw ParseError(6, "unknown section tag " + std::to_string(tag));
    }
    const std::uint64_t len = r.u64();
    if (len != bytes.size() - kContainerHeaderBytes) {
        throw ParseError(7, "payload length " + std::to_string(len) + " does not match file size");
    }
    return {static_cast<SectionTag>(tag), bytes.subspan(kContainerHeaderBytes), kContainerHeaderBytes};
}

}  // namespace morphis
