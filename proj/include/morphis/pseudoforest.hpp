#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "morphis/gf2.hpp"
#include "morphis/hash.hpp"

namespace morphis {

class DuplicateKeyError : public std::invalid_argument {
public:
    explicit DuplicateKeyError(std::size_t index)
        : std::invalid_argument("duplicate key at index " + std::to_string(index)), index_(index) {}
    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Throws DuplicateKeyError naming the later of two equal hashes.
void check_distinct(std::span<const KeyHash> keys);

/// The hashed multigraph: node set [0, n), edge j joins u[j] = h_0(j) and v[j] = h_1(j).
/// Loops and parallel edges are allowed.
struct HashedGraph {
    std::size_t n = 0;
    Variant variant = Variant::kPlain;
    std::vector<std::uint32_t> u;
    std::vector<std::uint32_t> v;

    [[nodiscard]] std::size_t edges() const noexcept { return u.size(); }
    /// Endpoint the edge points to under orientation bit `y`.
    [[nodiscard]] std::uint32_t target(std::size_t j, bool y) const noexcept { return y ? v[j] : u[j]; }
};

/// Plain uses `seed0` for both candidates; bipartite uses seed0 for the left
/// side and seed1 for the right side.
[[nodiscard]] HashedGraph build_graph(std::span<const KeyHash> keys, std::uint64_t seed0,
                                      std::uint64_t seed1, std::size_t n, Variant variant);

/// Union-find with per-root node and edge counters, reusable across seeds.
class PseudoforestChecker {
public:
    /// True iff no component has more edges than nodes. With n edges on n
    /// nodes this means every component is exactly one cycle with trees.
    bool check(std::span<const std::uint32_t> u, std::span<const std::uint32_t> v, std::size_t n);

    /// Components of the last checked graph; only meaningful after check() returned true.
    [[nodiscard]] std::size_t components() const;

private:
    std::uint32_t find(std::uint32_t x) noexcept {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> nodes_;
    std::vector<std::uint32_t> edges_;
    std::size_t n_ = 0;
};

[[nodiscard]] bool is_pseudoforest(const HashedGraph& g);

/// Connected components over all n nodes; isolated nodes count.
[[nodiscard]] std::size_t count_components(const HashedGraph& g);

/// d_i = (|{j : u_j == i}| + 1) mod 2.
[[nodiscard]] BitVector compute_d(const HashedGraph& g);

/// Explicit n x edges incidence matrix over GF(2); loops give zero columns.
[[nodiscard]] BitMatrix incidence_matrix(const HashedGraph& g);

/// The product A*H computed without materializing A: row i is the XOR of
/// rows[j] over edges j with exactly one endpoint at i.
[[nodiscard]] BitMatrix accumulate_ah(const HashedGraph& g, std::span<const BitVector> rows);

/// An orientation y with every indegree exactly 1: degree-1 peeling forces
/// tree edges, then each remaining cycle is walked from its lowest node along
/// its lowest-index edge. Throws std::logic_error if g is not a pseudoforest.
[[nodiscard]] BitVector orient_pseudoforest(const HashedGraph& g);

/// True iff every node receives exactly one edge under orientation y.
[[nodiscard]] bool is_valid_orientation(const HashedGraph& g, const BitVector& y);

/// Bipartite filter: every position of side `side` in [0, half) is hit by
/// some key under `seed`.
[[nodiscard]] bool surjectivity_filter(std::span<const KeyHash> keys, std::uint64_t seed,
                                       unsigned side, std::size_t half);

}  // namespace morphis
