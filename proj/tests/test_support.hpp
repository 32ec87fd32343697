#pragma once

// Brute-force reference implementations used as oracles by the tests.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "morphis/gf2.hpp"
#include "morphis/gfp.hpp"
#include "morphis/hash.hpp"
#include "morphis/pseudoforest.hpp"

namespace morphis::test {

inline std::vector<KeyHash> random_keys(std::mt19937_64& rng, std::size_t n) {
    std::vector<KeyHash> keys(n);
    for (auto& k : keys) {
        k.hi = rng();
        k.lo = rng();
    }
    return keys;
}

inline BitVector random_bits(std::mt19937_64& rng, std::size_t n, double p_one = 0.5) {
    std::bernoulli_distribution coin(p_one);
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v.set(i, coin(rng));
    }
    return v;
}

inline BitMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                               double p_one = 0.5) {
    std::bernoulli_distribution coin(p_one);
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m.set(r, c, coin(rng));
        }
    }
    return m;
}

// A*x by the definition, entry by entry.
inline BitVector naive_multiply(const BitMatrix& a, const BitVector& x) {
    BitVector out(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        bool acc = false;
        for (std::size_t c = 0; c < a.cols(); ++c) {
            acc ^= a.get(r, c) && x.get(c);
        }
        out.set(r, acc);
    }
    return out;
}

inline BitVector bits_of(std::uint64_t mask, std::size_t n) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v.set(i, (mask >> i) & 1);
    }
    return v;
}

// Every x in GF(2)^cols with A*x = d (cols <= 20).
inline std::vector<BitVector> all_gf2_solutions(const BitMatrix& a, const BitVector& d) {
    std::vector<BitVector> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a.cols()); ++mask) {
        auto x = bits_of(mask, a.cols());
        if (naive_multiply(a, x) == d) {
            out.push_back(std::move(x));
        }
    }
    return out;
}

// Rank as log2 of the size of the row space, enumerated (rows <= 16).
inline std::size_t brute_force_rank(const BitMatrix& a) {
    std::vector<BitVector> span_set;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a.rows()); ++mask) {
        BitVector acc(a.cols());
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if ((mask >> r) & 1) {
                acc ^= a.row_vector(r);
            }
        }
        bool seen = false;
        for (const auto& s : span_set) {
            seen = seen || s == acc;
        }
        if (!seen) {
            span_set.push_back(acc);
        }
    }
    std::size_t rank = 0;
    while ((std::size_t{1} << rank) < span_set.size()) {
        ++rank;
    }
    return rank;
}

// Exhaustive check over all 2^m orientations (m <= 20 edges).
inline bool orientation_exists(const HashedGraph& g) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.edges()); ++mask) {
        if (is_valid_orientation(g, bits_of(mask, g.edges()))) {
            return true;
        }
    }
    return false;
}

inline std::size_t count_valid_orientations(const HashedGraph& g) {
    std::size_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.edges()); ++mask) {
        count += is_valid_orientation(g, bits_of(mask, g.edges())) ? 1 : 0;
    }
    return count;
}

// Indegree check written independently of is_valid_orientation.
inline bool indegrees_all_one(const HashedGraph& g, const BitVector& y) {
    std::vector<int> indeg(g.n, 0);
    for (std::size_t j = 0; j < g.edges(); ++j) {
        ++indeg[y.get(j) ? g.v[j] : g.u[j]];
    }
    for (int d : indeg) {
        if (d != 1) {
            return false;
        }
    }
    return true;
}

inline std::size_t dfs_components(std::size_t n, const std::vector<std::uint32_t>& u,
                                  const std::vector<std::uint32_t>& v) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::size_t j = 0; j < u.size(); ++j) {
        adj[u[j]].push_back(v[j]);
        adj[v[j]].push_back(u[j]);
    }
    std::vector<char> seen(n, 0);
    std::size_t comps = 0;
    std::function<void(std::uint32_t)> dfs = [&](std::uint32_t x) {
        seen[x] = 1;
        for (auto y : adj[x]) {
            if (!seen[y]) {
                dfs(y);
            }
        }
    };
    for (std::uint32_t s = 0; s < n; ++s) {
        if (!seen[s]) {
            ++comps;
            dfs(s);
        }
    }
    return comps;
}

// Pseudoforest by definition: every component has at most as many edges as nodes.
inline bool edges_le_nodes_per_component(std::size_t n, const std::vector<std::uint32_t>& u,
                                         const std::vector<std::uint32_t>& v) {
    std::vector<int> comp(n, -1);
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::size_t j = 0; j < u.size(); ++j) {
        adj[u[j]].push_back(v[j]);
        adj[v[j]].push_back(u[j]);
    }
    int c = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (comp[s] != -1) {
            continue;
        }
        std::vector<std::uint32_t> stack{s};
        comp[s] = c;
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            for (auto y : adj[x]) {
                if (comp[y] == -1) {
                    comp[y] = c;
                    stack.push_back(y);
                }
            }
        }
        ++c;
    }
    std::vector<int> nodes(c, 0);
    std::vector<int> edges(c, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++nodes[comp[i]];
    }
    for (std::size_t j = 0; j < u.size(); ++j) {
        ++edges[comp[u[j]]];
    }
    for (int i = 0; i < c; ++i) {
        if (edges[i] > nodes[i]) {
            return false;
        }
    }
    return true;
}

inline HashedGraph graph_from_edges(std::size_t n, std::vector<std::uint32_t> u,
                                    std::vector<std::uint32_t> v) {
    HashedGraph g;
    g.n = n;
    g.variant = Variant::kPlain;
    g.u = std::move(u);
    g.v = std::move(v);
    return g;
}

inline HashedGraph random_graph(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<std::uint32_t> pos(0, static_cast<std::uint32_t>(n - 1));
    std::vector<std::uint32_t> u(n);
    std::vector<std::uint32_t> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        u[j] = pos(rng);
        v[j] = pos(rng);
    }
    return graph_from_edges(n, std::move(u), std::move(v));
}

// Solutions of A*x = d over F_p by enumeration (p^cols small).
inline std::vector<std::vector<std::uint64_t>> all_gfp_solutions(const PrimeFieldMatrix& a,
                                                                 const PrimeFieldVector& d) {
    const auto& f = a.field();
    const std::uint64_t p = f.modulus();
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<std::uint64_t> x(a.cols(), 0);
    while (true) {
        bool ok = true;
        for (std::size_t r = 0; r < a.rows() && ok; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t c = 0; c < a.cols(); ++c) {
                acc = (acc + a.at(r, c) * x[c]) % p;
            }
            ok = acc == d[r];
        }
        if (ok) {
            out.push_back(x);
        }
        std::size_t i = 0;
        while (i < x.size() && ++x[i] == p) {
            x[i++] = 0;
        }
        if (i == x.size()) {
            break;
        }
    }
    return out;
}

}  // namespace morphis::test
