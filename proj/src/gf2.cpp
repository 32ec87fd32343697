#include "morphis/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace morphis {

namespace {

std::uint64_t tail_mask(std::size_t len) {
    const std::size_t rem = len & 63;
    return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

void xor_words(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] ^= src[i];
    }
}

// In-place Gauss-Jordan over the first `cols` columns. Returns the pivot
// column of each of the first `rank` rows.
std::vector<std::size_t> eliminate(BitMatrix& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < m.rows(); ++c) {
        std::size_t pivot = rank;
        while (pivot < m.rows() && !m.get(pivot, c)) {
            ++pivot;
        }
        if (pivot == m.rows()) {
            continue;
        }
        if (pivot != rank) {
            std::swap_ranges(m.row(pivot).begin(), m.row(pivot).end(), m.row(rank).begin());
        }
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r != rank && m.get(r, c)) {
                xor_words(m.row(r), m.row(rank));
            }
        }
        pivots.push_back(c);
        ++rank;
    }
    return pivots;
}

}  // namespace

BitVector::BitVector(std::size_t len) : len_(len), words_(words_for_bits(len), 0) {}

BitVector::BitVector(std::initializer_list<int> bits) : BitVector(bits.size()) {
    std::size_t i = 0;
    for (int b : bits) {
        set(i++, b != 0);
    }
}

BitVector BitVector::from_words(std::size_t len, std::span<const std::uint64_t> words) {
    BitVector v(len);
    const std::size_t n = std::min(words.size(), v.words_.size());
    std::copy_n(words.begin(), n, v.words_.begin());
    if (!v.words_.empty()) {
        v.words_.back() &= tail_mask(len);
    }
    return v;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.len_ != len_) {
        throw std::invalid_argument("BitVector xor: length mismatch");
    }
    xor_words(words_, other.words_);
    return *this;
}

std::size_t BitVector::popcount() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) {
        c += static_cast<std::size_t>(std::popcount(w));
    }
    return c;
}

bool BitVector::is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool dot(const BitVector& u, const BitVector& v) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("dot: length mismatch");
    }
    std::uint64_t acc = 0;
    const auto a = u.words();
    const auto b = v.words();
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc ^= a[i] & b[i];
    }
    return std::popcount(acc) & 1;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for_bits(cols)), data_(rows * stride_, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, true);
    }
    return m;
}

BitMatrix BitMatrix::from_rows(std::span<const BitVector> rows, std::size_t cols) {
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        m.xor_into_row(r, rows[r]);
    }
    return m;
}

BitVector BitMatrix::row_vector(std::size_t r) const {
    return BitVector::from_words(cols_, row(r));
}

void BitMatrix::xor_into_row(std::size_t r, const BitVector& v) {
    if (v.size() != cols_) {
        throw std::invalid_argument("BitMatrix::xor_into_row: width mismatch");
    }
    xor_words(row(r), v.words());
}

BitVector BitMatrix::multiply(const BitVector& x) const {
    if (x.size() != cols_) {
        throw std::invalid_argument("BitMatrix::multiply: dimension mismatch");
    }
    BitVector out(rows_);
    const auto xw = x.words();
    for (std::size_t r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        const auto rw = row(r);
        for (std::size_t i = 0; i < stride_; ++i) {
            acc ^= rw[i] & xw[i];
        }
        out.set(r, std::popcount(acc) & 1);
    }
    return out;
}

BitMatrix BitMatrix::multiply(const BitMatrix& other) const {
    if (other.rows_ != cols_) {
        throw std::invalid_argument("BitMatrix::multiply: dimension mismatch");
    }
    BitMatrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            if (get(r, k)) {
                xor_words(out.row(r), other.row(k));
            }
        }
    }
    return out;
}

std::optional<BitVector> gf2_solve(const BitMatrix& a, const BitVector& d) {
    if (a.rows() != d.size()) {
        throw std::invalid_argument("gf2_solve: matrix has " + std::to_string(a.rows()) +
                                    " rows but right-hand side has " + std::to_string(d.size()));
    }
    const std::size_t k = a.cols();
    BitMatrix aug(a.rows(), k + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto dst = aug.row(r);
        const auto src = a.row(r);
        std::copy(src.begin(), src.end(), dst.begin());
        aug.set(r, k, d.get(r));
    }
    const auto pivots = eliminate(aug, k);
    for (std::size_t r = pivots.size(); r < aug.rows(); ++r) {
        if (aug.get(r, k)) {
            return std::nullopt;
        }
    }
    BitVector x(k);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        x.set(pivots[r], aug.get(r, k));
    }
    return x;
}

std::size_t gf2_rank(const BitMatrix& a) {
    BitMatrix copy = a;
    return eliminate(copy, copy.cols()).size();
}

}  // namespace morphis
