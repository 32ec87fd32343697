#include "morphis/base_case.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "morphis/pseudoforest.hpp"

namespace morphis {

void BaseCaseConfig::validate() const {
    if (n == 0) {
        throw std::invalid_argument("base case needs n >= 1");
    }
    if (n >= (std::size_t{1} << 31)) {
        throw std::invalid_argument("base case n too large");
    }
    if (b > n) {
        throw std::invalid_argument("retrieval bits b=" + std::to_string(b) + " exceed n=" +
                                    std::to_string(n));
    }
    if (variant == Variant::kBipartite && n % 2 != 0) {
        throw std::invalid_argument("bipartite variant requires even n, got n=" + std::to_string(n));
    }
    if (variant == Variant::kBipartite && b == 0) {
        // y = 0 would send every key to the left half.
        throw std::invalid_argument("bipartite variant requires b >= 1");
    }
    if (max_seeds >= (std::uint64_t{1} << 32)) {
        throw std::invalid_argument("max_seeds must be below 2^32");
    }
}

std::string SearchStats::to_string() const {
    std::ostringstream os;
    os << "seeds_tested=" << seeds_tested << " seeds_admitted=" << seeds_admitted
       << " pairs_tested=" << pairs_tested << " successful_seed=" << successful_seed
       << " seed_code=" << seed_code << " pseudoforests_found=" << pseudoforests_found
       << " systems_solved=" << systems_solved << " systems_unsolvable=" << systems_unsolvable
       << " components=" << components << " success=" << (success ? "yes" : "no");
    return os.str();
}

SeedPair decode_seed_pair(std::uint64_t code) {
    auto tri = [](std::uint64_t i) { return i * (i - 1) / 2; };
    auto i = static_cast<std::uint64_t>((1.0L + std::sqrt(1.0L + 8.0L * code)) / 2.0L);
    while (i > 1 && tri(i) > code) {
        --i;
    }
    while (tri(i + 1) <= code) {
        ++i;
    }
    if (i < 1) {
        i = 1;
    }
    return {i, code - tri(i)};
}

namespace {

// Solves A*H*x = d for the graph given by endpoint arrays; u holds the
// which=0 candidates.
std::optional<BitVector> solve_orientation(std::span<const KeyHash> keys,
                                           std::span<const std::uint32_t> u,
                                           std::span<const std::uint32_t> v, std::size_t n,
                                           std::uint64_t retrieval_seed, std::size_t b) {
    BitMatrix ah(n, b);
    BitVector d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.set(i, true);
    }
    for (std::size_t j = 0; j < keys.size(); ++j) {
        d.flip(u[j]);
        if (u[j] == v[j]) {
            continue;
        }
        const BitVector row = retrieval_row(keys[j], retrieval_seed, b);
        ah.xor_into_row(u[j], row);
        ah.xor_into_row(v[j], row);
    }
    return gf2_solve(ah, d);
}

struct SearchOutcome {
    BaseCaseMphf mphf;
    SearchStats stats;
};

SearchOutcome search_plain(std::span<const KeyHash> keys, const BaseCaseConfig& cfg, bool solve) {
    const std::size_t n = cfg.n;
    SearchOutcome out;
    out.mphf.variant = Variant::kPlain;
    out.mphf.n = n;
    out.mphf.b = cfg.b;
    auto& st = out.stats;
    std::vector<std::uint32_t> u(n), v(n);
    PseudoforestChecker checker;
    for (std::uint64_t seed = 0; seed < cfg.max_seeds; ++seed) {
        st.seeds_tested = seed + 1;
        const std::uint64_t k0 = seed_key(seed, Stream::kCandidate0);
        const std::uint64_t k1 = seed_key(seed, Stream::kCandidate1);
        for (std::size_t j = 0; j < n; ++j) {
            u[j] = static_cast<std::uint32_t>(reduce(derive_keyed(keys[j], k0), n));
            v[j] = static_cast<std::uint32_t>(reduce(derive_keyed(keys[j], k1), n));
        }
        if (!checker.check(u, v, n)) {
            continue;
        }
        ++st.pseudoforests_found;
        st.components = checker.components();
        if (solve) {
            auto x = solve_orientation(keys, u, v, n, seed, cfg.b);
            if (!x) {
                ++st.systems_unsolvable;
                continue;
            }
            ++st.systems_solved;
            out.mphf.x = std::move(*x);
        }
        out.mphf.seed0 = seed;
        st.successful_seed = seed;
        st.seed_code = seed;
        st.success = true;
        return out;
    }
    return out;
}

SearchOutcome search_bipartite(std::span<const KeyHash> keys, const BaseCaseConfig& cfg,
                               bool solve) {
    const std::size_t n = cfg.n;
    const std::size_t half = n / 2;
    SearchOutcome out;
    out.mphf.variant = Variant::kBipartite;
    out.mphf.n = n;
    out.mphf.b = cfg.b;
    auto& st = out.stats;

    // Admitted seeds, their raw indices and their positions already shifted
    // into the right half.
    std::vector<std::uint64_t> admitted;
    std::vector<std::uint32_t> right_pool;
    std::vector<std::uint32_t> left(n);
    std::vector<std::uint64_t> cover(words_for_bits(half));
    PseudoforestChecker checker;

    for (std::uint64_t seed = 0; seed < cfg.max_seeds; ++seed) {
        st.seeds_tested = seed + 1;
        const std::uint64_t key = seed_key(seed, Stream::kBipartite);
        std::fill(cover.begin(), cover.end(), 0);
        for (std::size_t j = 0; j < n; ++j) {
            const auto p = static_cast<std::uint32_t>(reduce(derive_keyed(keys[j], key), half));
            left[j] = p;
            cover[p >> 6] |= std::uint64_t{1} << (p & 63);
        }
        std::size_t covered = 0;
        for (auto w : cover) {
            covered += static_cast<std::size_t>(std::popcount(w));
        }
        if (covered != half) {
            continue;
        }
        ++st.seeds_admitted;

        for (std::size_t a = 0; a < admitted.size(); ++a) {
            if (st.pairs_tested >= cfg.max_pairs) {
                return out;
            }
            ++st.pairs_tested;
            const std::span<const std::uint32_t> right(right_pool.data() + a * n, n);
            if (!checker.check(left, right, n)) {
                continue;
            }
            ++st.pseudoforests_found;
            st.components = checker.components();
            const std::uint64_t other = admitted[a];
            if (solve) {
                auto x = solve_orientation(keys, left, right, n, pair_seed(seed, other), cfg.b);
                if (!x) {
                    ++st.systems_unsolvable;
                    continue;
                }
                ++st.systems_solved;
                out.mphf.x = std::move(*x);
            }
            out.mphf.seed0 = seed;
            out.mphf.seed1 = other;
            st.successful_seed = seed;
            st.seed_code = encode_seed_pair(seed, other);
            st.success = true;
            return out;
        }

        admitted.push_back(seed);
        for (std::size_t j = 0; j < n; ++j) {
            right_pool.push_back(left[j] + static_cast<std::uint32_t>(half));
        }
    }
    return out;
}

SearchOutcome run_search(std::span<const KeyHash> keys, const BaseCaseConfig& cfg, bool solve) {
    cfg.validate();
    if (keys.size() != cfg.n) {
        throw std::invalid_argument("base case expects " + std::to_string(cfg.n) + " keys, got " +
                                    std::to_string(keys.size()));
    }
    check_distinct(keys);
    return cfg.variant == Variant::kPlain ? search_plain(keys, cfg, solve)
                                          : search_bipartite(keys, cfg, solve);
}

}  // namespace

BaseCaseResult construct_base(std::span<const KeyHash> keys, const BaseCaseConfig& cfg) {
    auto outcome = run_search(keys, cfg, true);
    if (!outcome.stats.success) {
        throw ConstructionError("seed search exhausted max_seeds=" + std::to_string(cfg.max_seeds) +
                                    "/max_pairs=" + std::to_string(cfg.max_pairs) +
                                    " (" + outcome.stats.to_string() + ")",
                                outcome.stats);
    }
    std::vector<char> hit(cfg.n, 0);
    for (const auto& kh : keys) {
        const auto pos = query_base(outcome.mphf, kh);
        if (hit[pos]) {
            throw std::logic_error("construct_base: result is not a bijection");
        }
        hit[pos] = 1;
    }
    return {std::move(outcome.mphf), outcome.stats};
}

SearchStats shockhash_stats_base(std::span<const KeyHash> keys, const BaseCaseConfig& cfg) {
    auto outcome = run_search(keys, cfg, false);
    if (!outcome.stats.success) {
        throw ConstructionError("seed search exhausted max_seeds=" + std::to_string(cfg.max_seeds) +
                                    "/max_pairs=" + std::to_string(cfg.max_pairs) +
                                    " (" + outcome.stats.to_string() + ")",
                                outcome.stats);
    }
    return outcome.stats;
}

std::uint64_t query_base(const BaseCaseMphf& m, const KeyHash& kh) {
    const bool which = m.b != 0 && dot(retrieval_row(kh, m.retrieval_seed(), m.b), m.x);
    if (m.variant == Variant::kPlain) {
        return candidate(kh, m.seed0, which ? 1 : 0, m.n, Variant::kPlain);
    }
    return which ? candidate(kh, m.seed1, 1, m.n, Variant::kBipartite)
                 : candidate(kh, m.seed0, 0, m.n, Variant::kBipartite);
}

void write_base_payload(ByteWriter& w, const BaseCaseMphf& m) {
    w.u8(static_cast<std::uint8_t>(m.variant));
    w.varint(m.n);
    w.varint(m.b);
    w.varint(m.seed_code());
    w.bits(m.x);
}

BaseCaseMphf read_base_payload(ByteReader& r) {
    BaseCaseMphf m;
    const std::size_t variant_at = r.absolute();
    const std::uint8_t variant = r.u8();
    if (variant > 1) {
        throw ParseError(variant_at, "unknown variant " + std::to_string(variant));
    }
    m.variant = static_cast<Variant>(variant);
    const std::size_t n_at = r.absolute();
    m.n = r.varint();
    m.b = r.varint();
    if (m.n == 0 || m.b > m.n || (m.variant == Variant::kBipartite && m.n % 2 != 0)) {
        throw ParseError(n_at, "inconsistent base case dimensions n=" + std::to_string(m.n) +
                                   " b=" + std::to_string(m.b));
    }
    const std::uint64_t code = r.varint();
    if (m.variant == Variant::kPlain) {
        m.seed0 = code;
    } else {
        const auto pair = decode_seed_pair(code);
        m.seed0 = pair.left;
        m.seed1 = pair.right;
    }
    m.x = r.bits(m.b);
    return m;
}

std::vector<std::uint8_t> serialize_base(const BaseCaseMphf& m) {
    ByteWriter w;
    write_base_payload(w, m);
    return write_container(SectionTag::kBaseCase, w.buffer());
}

BaseCaseMphf deserialize_base(std::span<const std::uint8_t> bytes) {
    const Section section = read_container(bytes);
    if (section.tag != SectionTag::kBaseCase) {
        throw ParseError(6, "expected a base case section");
    }
    ByteReader r(section.payload, section.payload_offset);
    BaseCaseMphf m = read_base_payload(r);
    if (!r.at_end()) {
        r.fail("trailing bytes after base case");
    }
    return m;
}

}  // namespace morphis
