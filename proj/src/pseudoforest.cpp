#include "morphis/pseudoforest.hpp"

#include <algorithm>
#include <numeric>

namespace morphis {

void check_distinct(std::span<const KeyHash> keys) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (keys[order[i]] == keys[order[i - 1]]) {
            throw DuplicateKeyError(order[i]);
        }
    }
}

HashedGraph build_graph(std::span<const KeyHash> keys, std::uint64_t seed0, std::uint64_t seed1,
                        std::size_t n, Variant variant) {
    if (keys.size() != n) {
        throw std::invalid_argument("build_graph: expected " + std::to_string(n) + " keys, got " +
                                    std::to_string(keys.size()));
    }
    check_distinct(keys);
    HashedGraph g;
    g.n = n;
    g.variant = variant;
    g.u.resize(n);
    g.v.resize(n);
    const std::uint64_t right_seed = variant == Variant::kPlain ? seed0 : seed1;
    for (std::size_t j = 0; j < n; ++j) {
        g.u[j] = static_cast<std::uint32_t>(candidate(keys[j], seed0, 0, n, variant));
        g.v[j] = static_cast<std::uint32_t>(candidate(keys[j], right_seed, 1, n, variant));
    }
    return g;
}

bool PseudoforestChecker::check(std::span<const std::uint32_t> u, std::span<const std::uint32_t> v,
                                std::size_t n) {
    n_ = n;
    parent_.resize(n);
    nodes_.assign(n, 1);
    edges_.assign(n, 0);
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    for (std::size_t j = 0; j < u.size(); ++j) {
        const std::uint32_t a = find(u[j]);
        const std::uint32_t b = find(v[j]);
        if (a == b) {
            if (++edges_[a] > nodes_[a]) {
                return false;
            }
            continue;
        }
        parent_[a] = b;
        nodes_[b] += nodes_[a];
        edges_[b] += edges_[a] + 1;
        if (edges_[b] > nodes_[b]) {
            return false;
        }
    }
    return true;
}

std::size_t PseudoforestChecker::components() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        c += parent_[i] == i;
    }
    return c;
}

bool is_pseudoforest(const HashedGraph& g) {
    PseudoforestChecker checker;
    return checker.check(g.u, g.v, g.n);
}

std::size_t count_components(const HashedGraph& g) {
    std::vector<std::uint32_t> parent(g.n);
    std::iota(parent.begin(), parent.end(), std::uint32_t{0});
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = g.n;
    for (std::size_t j = 0; j < g.edges(); ++j) {
        const auto a = find(g.u[j]);
        const auto b = find(g.v[j]);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components;
}

BitVector compute_d(const HashedGraph& g) {
    BitVector d(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        d.set(i, true);
    }
    for (auto node : g.u) {
        d.flip(node);
    }
    return d;
}

BitMatrix incidence_matrix(const HashedGraph& g) {
    BitMatrix a(g.n, g.edges());
    for (std::size_t j = 0; j < g.edges(); ++j) {
        if (g.u[j] != g.v[j]) {
            a.set(g.u[j], j, true);
            a.set(g.v[j], j, true);
        }
    }
    return a;
}

BitMatrix accumulate_ah(const HashedGraph& g, std::span<const BitVector> rows) {
    if (rows.size() != g.edges()) {
        throw std::invalid_argument("accumulate_ah: need one retrieval row per edge");
    }
    const std::size_t b = rows.empty() ? 0 : rows.front().size();
    BitMatrix ah(g.n, b);
    for (std::size_t j = 0; j < g.edges(); ++j) {
        if (g.u[j] == g.v[j]) {
            continue;
        }
        ah.xor_into_row(g.u[j], rows[j]);
        ah.xor_into_row(g.v[j], rows[j]);
    }
    return ah;
}

bool is_valid_orientation(const HashedGraph& g, const BitVector& y) {
    if (y.size() != g.edges() || g.edges() != g.n) {
        return false;
    }
    std::vector<char> hit(g.n, 0);
    for (std::size_t j = 0; j < g.edges(); ++j) {
        const auto t = g.target(j, y.get(j));
        if (hit[t]) {
            return false;
        }
        hit[t] = 1;
    }
    return true;
}

BitVector orient_pseudoforest(const HashedGraph& g) {
    if (g.edges() != g.n || !is_pseudoforest(g)) {
        throw std::logic_error("orient_pseudoforest: graph is not a pseudoforest");
    }
    const std::size_t n = g.n;
    const std::size_t m = g.edges();

    // CSR adjacency; a loop is listed once at its node but counts 2 towards the degree.
    std::vector<std::uint32_t> start(n + 1, 0);
    std::vector<std::uint32_t> degree(n, 0);
    for (std::size_t j = 0; j < m; ++j) {
        ++start[g.u[j] + 1];
        degree[g.u[j]] += 1;
        degree[g.v[j]] += 1;
        if (g.u[j] != g.v[j]) {
            ++start[g.v[j] + 1];
        }
    }
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<std::uint32_t> adj(start[n]);
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (std::size_t j = 0; j < m; ++j) {
        adj[fill[g.u[j]]++] = static_cast<std::uint32_t>(j);
        if (g.u[j] != g.v[j]) {
            adj[fill[g.v[j]]++] = static_cast<std::uint32_t>(j);
        }
    }

    BitVector y(m);
    std::vector<char> used(m, 0);
    auto orient_towards = [&](std::uint32_t j, std::uint32_t node) {
        y.set(j, g.u[j] != node);
        used[j] = 1;
    };
    auto first_free_edge = [&](std::uint32_t node) -> std::int64_t {
        for (auto k = start[node]; k < start[node + 1]; ++k) {
            if (!used[adj[k]]) {
                return adj[k];
            }
        }
        return -1;
    };

    std::vector<std::uint32_t> queue;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (degree[i] == 1) {
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        const std::uint32_t leaf = queue.back();
        queue.pop_back();
        if (degree[leaf] != 1) {
            continue;
        }
        const auto j = static_cast<std::uint32_t>(first_free_edge(leaf));
        orient_towards(j, leaf);
        degree[leaf] = 0;
        const std::uint32_t other = g.u[j] == leaf ? g.v[j] : g.u[j];
        if (--degree[other] == 1) {
            queue.push_back(other);
        }
    }

    // What remains is a disjoint union of cycles.
    for (std::uint32_t first = 0; first < n; ++first) {
        std::int64_t j = first_free_edge(first);
        std::uint32_t cur = first;
        while (j >= 0) {
            const auto e = static_cast<std::uint32_t>(j);
            const std::uint32_t next = g.u[e] == cur ? g.v[e] : g.u[e];
            orient_towards(e, next);
            cur = next;
            j = cur == first ? -1 : first_free_edge(cur);
        }
    }

    if (!is_valid_orientation(g, y)) {
        throw std::logic_error("orient_pseudoforest: produced an invalid orientation");
    }
    return y;
}

bool surjectivity_filter(std::span<const KeyHash> keys, std::uint64_t seed, unsigned side,
                         std::size_t half) {
    if (half == 0) {
        return keys.empty();
    }
    std::vector<char> hit(half, 0);
    std::size_t covered = 0;
    for (const auto& kh : keys) {
        const auto pos = candidate(kh, seed, side, 2 * half, Variant::kBipartite) - side * half;
        if (!hit[pos]) {
            hit[pos] = 1;
            ++covered;
        }
    }
    return covered == half;
}

}  // namespace morphis
