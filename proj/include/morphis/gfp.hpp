#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace morphis {

/// Arithmetic context for F_p. Construction rejects non-prime moduli.
class PrimeField {
public:
    explicit PrimeField(std::uint64_t p);

    [[nodiscard]] std::uint64_t modulus() const noexcept { return p_; }

    [[nodiscard]] std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
        const std::uint64_t s = a + b;
        return (s >= p_ || s < a) ? s - p_ : s;
    }
    [[nodiscard]] std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
        return a >= b ? a - b : a + (p_ - b);
    }
    [[nodiscard]] std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
    [[nodiscard]] std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
    }
    [[nodiscard]] std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept;
    /// Multiplicative inverse of a nonzero element.
    [[nodiscard]] std::uint64_t inv(std::uint64_t a) const;

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint64_t p_;
};

[[nodiscard]] bool is_prime(std::uint64_t p) noexcept;

class PrimeFieldVector {
public:
    PrimeFieldVector(PrimeField field, std::size_t len);
    PrimeFieldVector(PrimeField field, std::vector<std::uint64_t> entries);

    [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] std::uint64_t operator[](std::size_t i) const noexcept { return entries_[i]; }
    void set(std::size_t i, std::uint64_t value);
    [[nodiscard]] std::span<const std::uint64_t> entries() const noexcept { return entries_; }

    friend bool operator==(const PrimeFieldVector&, const PrimeFieldVector&) = default;

private:
    PrimeField field_;
    std::vector<std::uint64_t> entries_;
};

class PrimeFieldMatrix {
public:
    PrimeFieldMatrix(PrimeField field, std::size_t rows, std::size_t cols);

    [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] std::uint64_t at(std::size_t r, std::size_t c) const noexcept {
        return data_[r * cols_ + c];
    }
    void set(std::size_t r, std::size_t c, std::uint64_t value);

    [[nodiscard]] PrimeFieldVector multiply(const PrimeFieldVector& x) const;

private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint64_t> data_;
};

/// Solves a*x = d over F_p with first-nonzero pivoting; free variables are 0.
/// Throws std::invalid_argument on dimension or field mismatch.
[[nodiscard]] std::optional<PrimeFieldVector> gfp_solve(const PrimeFieldMatrix& a,
                                                        const PrimeFieldVector& d);

}  // namespace morphis
