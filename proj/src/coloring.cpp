#include <numeric>

#include "morphis/appendix.hpp"
#include "morphis/io.hpp"

namespace morphis {

std::size_t count_graph_components(std::size_t n_vertices, std::span<const Edge> edges) {
    std::vector<std::uint32_t> parent(n_vertices);
    std::iota(parent.begin(), parent.end(), std::uint32_t{0});
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = n_vertices;
    for (const auto& [a, b] : edges) {
        const auto ra = find(a);
        const auto rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components;
}

namespace {

// BFS 2-coloring; throws on an odd cycle.
void require_bipartite(std::size_t n, std::span<const Edge> edges) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> side(n, -1);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (side[s] != -1) {
            continue;
        }
        side[s] = 0;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const auto v = queue[head];
            for (auto w : adj[v]) {
                if (side[w] == -1) {
                    side[w] = 1 - side[v];
                    queue.push_back(w);
                } else if (side[w] == side[v]) {
                    throw std::invalid_argument("graph is not 2-colorable: odd cycle through vertex " +
                                                std::to_string(w));
                }
            }
        }
    }
}

}  // namespace

CompressedColoring build_two_coloring(std::size_t n_vertices, std::span<const Edge> edges,
                                      const BitVector& f, std::uint64_t first_seed,
                                      std::size_t retry_cap) {
    if (f.size() != n_vertices) {
        throw std::invalid_argument("coloring has " + std::to_string(f.size()) + " entries for " +
                                    std::to_string(n_vertices) + " vertices");
    }
    for (const auto& [a, b] : edges) {
        if (a >= n_vertices || b >= n_vertices) {
            throw std::invalid_argument("edge endpoint out of range");
        }
    }
    require_bipartite(n_vertices, edges);
    for (const auto& [a, b] : edges) {
        if (f.get(a) == f.get(b)) {
            throw std::invalid_argument("f is not a proper 2-coloring");
        }
    }

    CompressedColoring c;
    c.n_vertices = n_vertices;
    c.b = n_vertices - count_graph_components(n_vertices, edges);

    std::vector<KeyHash> vertex_hash(n_vertices);
    for (std::uint32_t v = 0; v < n_vertices; ++v) {
        vertex_hash[v] = master_hash(std::uint64_t{v});
    }
    BitVector ones(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        ones.set(e, true);
    }
    for (std::size_t attempt = 0; attempt < retry_cap; ++attempt) {
        const std::uint64_t seed = first_seed + attempt;
        std::vector<BitVector> rows(n_vertices);
        for (std::uint32_t v = 0; v < n_vertices; ++v) {
            rows[v] = retrieval_row(vertex_hash[v], seed, c.b);
        }
        BitMatrix ah(edges.size(), c.b);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            ah.xor_into_row(e, rows[edges[e].first]);
            ah.xor_into_row(e, rows[edges[e].second]);
        }
        if (auto x = gf2_solve(ah, ones)) {
            c.h_seed = seed;
            c.x = std::move(*x);
            c.retries = attempt;
            return c;
        }
    }
    throw RetryLimitError("two-coloring: no solution after " + std::to_string(retry_cap) + " seeds",
                          retry_cap);
}

bool query_color(const CompressedColoring& c, std::uint32_t vertex) {
    if (c.b == 0) {
        return false;
    }
    return dot(retrieval_row(master_hash(std::uint64_t{vertex}), c.h_seed, c.b), c.x);
}

// Payload: varint n_vertices, varint b, varint h_seed, ceil(b/8) bytes of x.
std::vector<std::uint8_t> serialize_coloring(const CompressedColoring& c) {
    ByteWriter w;
    w.varint(c.n_vertices);
    w.varint(c.b);
    w.varint(c.h_seed);
    w.bits(c.x);
    return write_container(SectionTag::kColoring, w.buffer());
}

CompressedColoring deserialize_coloring(std::span<const std::uint8_t> bytes) {
    const Section section = read_container(bytes);
    if (section.tag != SectionTag::kColoring) {
        throw ParseError(6, "expected a coloring section");
    }
    ByteReader r(section.payload, section.payload_offset);
    CompressedColoring c;
    c.n_vertices = r.varint();
    const std::size_t b_at = r.absolute();
    c.b = r.varint();
    if (c.b > c.n_vertices) {
        throw ParseError(b_at, "b exceeds vertex count");
    }
    c.h_seed = r.varint();
    c.x = r.bits(c.b);
    if (!r.at_end()) {
        r.fail("trailing bytes after coloring");
    }
    return c;
}

}  // namespace morphis
