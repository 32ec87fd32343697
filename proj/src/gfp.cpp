#include "morphis/gfp.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace morphis {

bool is_prime(std::uint64_t p) noexcept {
    if (p < 2) {
        return false;
    }
    for (std::uint64_t small : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (p % small == 0) {
            return p == small;
        }
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    auto mulmod = [p](std::uint64_t a, std::uint64_t b) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    };
    auto powmod = [&](std::uint64_t a, std::uint64_t e) {
        std::uint64_t r = 1;
        while (e != 0) {
            if (e & 1) {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        return r;
    };
    std::uint64_t d = p - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        std::uint64_t x = powmod(a, d);
        if (x == 1 || x == p - 1) {
            continue;
        }
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x);
            if (x == p - 1) {
                composite = false;
                break;
            }
        }
        if (composite) {
            return false;
        }
    }
    return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
    if (!is_prime(p)) {
        throw std::invalid_argument("PrimeField: modulus " + std::to_string(p) + " is not prime");
    }
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const noexcept {
    std::uint64_t r = 1 % p_;
    a %= p_;
    while (e != 0) {
        if (e & 1) {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
    if (a % p_ == 0) {
        throw std::domain_error("PrimeField::inv: zero has no inverse");
    }
    return pow(a, p_ - 2);
}

PrimeFieldVector::PrimeFieldVector(PrimeField field, std::size_t len)
    : field_(field), entries_(len, 0) {}

PrimeFieldVector::PrimeFieldVector(PrimeField field, std::vector<std::uint64_t> entries)
    : field_(field), entries_(std::move(entries)) {
    for (auto e : entries_) {
        if (e >= field_.modulus()) {
            throw std::invalid_argument("PrimeFieldVector: entry out of range");
        }
    }
}

void PrimeFieldVector::set(std::size_t i, std::uint64_t value) {
    if (value >= field_.modulus()) {
        throw std::invalid_argument("PrimeFieldVector: entry out of range");
    }
    entries_[i] = value;
}

PrimeFieldMatrix::PrimeFieldMatrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

void PrimeFieldMatrix::set(std::size_t r, std::size_t c, std::uint64_t value) {
    if (value >= field_.modulus()) {
        throw std::invalid_argument("PrimeFieldMatrix: entry out of range");
    }
    data_[r * cols_ + c] = value;
}

PrimeFieldVector PrimeFieldMatrix::multiply(const PrimeFieldVector& x) const {
    if (x.size() != cols_ || !(x.field() == field_)) {
        throw std::invalid_argument("PrimeFieldMatrix::multiply: dimension or field mismatch");
    }
    PrimeFieldVector out(field_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        for (std::size_t c = 0; c < cols_; ++c) {
            acc = field_.add(acc, field_.mul(at(r, c), x[c]));
        }
        out.set(r, acc);
    }
    return out;
}

std::optional<PrimeFieldVector> gfp_solve(const PrimeFieldMatrix& a, const PrimeFieldVector& d) {
    if (a.rows() != d.size()) {
        throw std::invalid_argument("gfp_solve: matrix has " + std::to_string(a.rows()) +
                                    " rows but right-hand side has " + std::to_string(d.size()));
    }
    if (!(a.field() == d.field())) {
        throw std::invalid_argument("gfp_solve: field mismatch");
    }
    const PrimeField& f = a.field();
    const std::size_t m = a.rows();
    const std::size_t k = a.cols();
    const std::size_t w = k + 1;
    std::vector<std::uint64_t> aug(m * w);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            aug[r * w + c] = a.at(r, c);
        }
        aug[r * w + k] = d[r];
    }

    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < k && rank < m; ++c) {
        std::size_t pivot = rank;
        while (pivot < m && aug[pivot * w + c] == 0) {
            ++pivot;
        }
        if (pivot == m) {
            continue;
        }
        if (pivot != rank) {
            for (std::size_t j = 0; j < w; ++j) {
                std::swap(aug[pivot * w + j], aug[rank * w + j]);
            }
        }
        const std::uint64_t scale = f.inv(aug[rank * w + c]);
        for (std::size_t j = c; j < w; ++j) {
            aug[rank * w + j] = f.mul(aug[rank * w + j], scale);
        }
        for (std::size_t r = 0; r < m; ++r) {
            const std::uint64_t factor = aug[r * w + c];
            if (r == rank || factor == 0) {
                continue;
            }
            for (std::size_t j = c; j < w; ++j) {
                aug[r * w + j] = f.sub(aug[r * w + j], f.mul(factor, aug[rank * w + j]));
            }
        }
        pivots.push_back(c);
        ++rank;
    }
    for (std::size_t r = rank; r < m; ++r) {
        if (aug[r * w + k] != 0) {
            return std::nullopt;
        }
    }
    PrimeFieldVector x(f, k);
    for (std::size_t r = 0; r < rank; ++r) {
        x.set(pivots[r], aug[r * w + k]);
    }
    return x;
}

}  // namespace morphis
