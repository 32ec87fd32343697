#pragma once

// Two more uses of "linear constraints + retrieval row" compression:
// storing a 2-coloring in n - c bits, and storing a function modulo p in a
// form that only answers differences f(a) - f(b), in (n - 1) digits.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "morphis/gf2.hpp"
#include "morphis/gfp.hpp"
#include "morphis/hash.hpp"

namespace morphis {

class RetryLimitError : public std::runtime_error {
public:
    RetryLimitError(const std::string& what, std::size_t attempts)
        : std::runtime_error(what), attempts_(attempts) {}
    [[nodiscard]] std::size_t attempts() const noexcept { return attempts_; }

private:
    std::size_t attempts_;
};

inline constexpr std::size_t kDefaultRetryCap = 64;

using Edge = std::pair<std::uint32_t, std::uint32_t>;

struct CompressedColoring {
    std::size_t n_vertices = 0;
    std::uint64_t h_seed = 0;
    /// n_vertices minus the number of connected components.
    std::size_t b = 0;
    BitVector x;
    /// Seeds rejected before h_seed (not stored).
    std::size_t retries = 0;

    [[nodiscard]] std::size_t payload_bits() const noexcept { return b; }
};

/// Number of connected components; isolated vertices count.
[[nodiscard]] std::size_t count_graph_components(std::size_t n_vertices, std::span<const Edge> edges);

/// Solves A*H*x = 1 with A the edge-vertex incidence matrix. `f` must be a
/// proper 2-coloring; std::invalid_argument is thrown for an odd cycle
/// (including self loops), an improper f or out-of-range endpoints.
[[nodiscard]] CompressedColoring build_two_coloring(std::size_t n_vertices,
                                                    std::span<const Edge> edges, const BitVector& f,
                                                    std::uint64_t first_seed = 0,
                                                    std::size_t retry_cap = kDefaultRetryCap);

[[nodiscard]] bool query_color(const CompressedColoring& c, std::uint32_t vertex);

struct DifferenceRetrieval {
    std::uint64_t p = 2;
    std::size_t n = 0;
    std::uint64_t h_seed = 0;
    /// n - 1 digits in F_p.
    std::size_t b = 0;
    std::vector<std::uint64_t> x;
    std::size_t retries = 0;

    [[nodiscard]] unsigned digit_width() const noexcept;
    /// b * ceil(log2 p).
    [[nodiscard]] std::size_t payload_bits() const noexcept { return b * digit_width(); }
};

/// Constraints y_a - y_b = f(a) - f(b) over consecutive keys in the given order.
[[nodiscard]] DifferenceRetrieval build_difference_retrieval(std::span<const KeyHash> keys,
                                                             std::span<const std::uint64_t> f,
                                                             std::uint64_t p,
                                                             std::uint64_t first_seed = 0,
                                                             std::size_t retry_cap = kDefaultRetryCap);

/// f(a) - f(b) mod p for two construction keys.
[[nodiscard]] std::uint64_t query_diff(const DifferenceRetrieval& d, const KeyHash& a,
                                       const KeyHash& b);

[[nodiscard]] std::vector<std::uint8_t> serialize_coloring(const CompressedColoring& c);
[[nodiscard]] CompressedColoring deserialize_coloring(std::span<const std::uint8_t> bytes);
[[nodiscard]] std::vector<std::uint8_t> serialize_difference(const DifferenceRetrieval& d);
[[nodiscard]] DifferenceRetrieval deserialize_difference(std::span<const std::uint8_t> bytes);

}  // namespace morphis
