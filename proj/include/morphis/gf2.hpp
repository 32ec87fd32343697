#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace morphis {

/// Packed bit vector over GF(2).
///
/// Bits are stored in 64-bit words, bit `i` lives in word `i / 64` at bit
/// position `i % 64` (least significant first). Bits at positions >= size()
/// are always zero, so word-level operations never need masking on read.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t len);
    BitVector(std::initializer_list<int> bits);

    static BitVector from_words(std::size_t len, std::span<const std::uint64_t> words);

    [[nodiscard]] std::size_t size() const noexcept { return len_; }
    [[nodiscard]] bool empty() const noexcept { return len_ == 0; }

    [[nodiscard]] bool get(std::size_t i) const noexcept {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool value) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }
    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

    BitVector& operator^=(const BitVector& other);

    [[nodiscard]] std::size_t popcount() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept;

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Scalar product over GF(2): parity of popcount(u AND v). Sizes must match.
[[nodiscard]] bool dot(const BitVector& u, const BitVector& v);

[[nodiscard]] constexpr std::size_t words_for_bits(std::size_t bits) noexcept {
    return (bits + 63) / 64;
}

/// Row-major packed GF(2) matrix. Each row uses the BitVector word layout.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);
    static BitMatrix from_rows(std::span<const BitVector> rows, std::size_t cols);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t words_per_row() const noexcept { return stride_; }

    [[nodiscard]] bool get(std::size_t r, std::size_t c) const noexcept {
        return (data_[r * stride_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool value) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (c & 63);
        auto& w = data_[r * stride_ + (c >> 6)];
        w = value ? (w | mask) : (w & ~mask);
    }

    [[nodiscard]] std::span<std::uint64_t> row(std::size_t r) noexcept {
        return {data_.data() + r * stride_, stride_};
    }
    [[nodiscard]] std::span<const std::uint64_t> row(std::size_t r) const noexcept {
        return {data_.data() + r * stride_, stride_};
    }
    [[nodiscard]] BitVector row_vector(std::size_t r) const;

    /// row(r) ^= v; v must have cols() bits.
    void xor_into_row(std::size_t r, const BitVector& v);

    [[nodiscard]] BitVector multiply(const BitVector& x) const;
    [[nodiscard]] BitMatrix multiply(const BitMatrix& other) const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> data_;
};

/// Solves a*x = d over GF(2) by Gauss-Jordan elimination on a copy.
///
/// The pivot for each column is the first remaining row with a one in that
/// column and free variables are fixed to zero, so the result is fully
/// determined by the inputs. Returns nullopt when the system is inconsistent.
/// Throws std::invalid_argument if a.rows() != d.size().
[[nodiscard]] std::optional<BitVector> gf2_solve(const BitMatrix& a, const BitVector& d);

[[nodiscard]] std::size_t gf2_rank(const BitMatrix& a);

}  // namespace morphis
