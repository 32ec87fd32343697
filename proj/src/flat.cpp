#include "morphis/flat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "morphis/pseudoforest.hpp"
#include "parallel.hpp"

namespace morphis {

void FlatConfig::validate() const {
    if (base_n < 2) {
        throw std::invalid_argument("flat: base_n must be >= 2");
    }
    if (b > base_n) {
        throw std::invalid_argument("flat: b must not exceed base_n");
    }
    if (!(bucket_load > 0.0)) {
        throw std::invalid_argument("flat: bucket_load must be positive");
    }
    if (variant == Variant::kBipartite && base_n % 2 != 0) {
        throw std::invalid_argument("flat: bipartite variant requires even base_n");
    }
    if (base_n > 4096) {
        throw std::invalid_argument("flat: base_n above 4096 is not supported");
    }
}

namespace {

constexpr std::uint16_t kKeepAll = 0xffff;

unsigned size_width(std::size_t base_n) {
    return static_cast<unsigned>(std::bit_width(base_n));
}

struct Selection {
    std::uint16_t threshold;
    std::size_t kept;
};

// Largest admissible retained count k <= cap: the k smallest threshold values
// must be separable from the rest by a strict comparison.
Selection select_threshold(std::vector<std::uint16_t> values, std::size_t cap, bool even) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    for (std::size_t k = std::min(m, cap);; --k) {
        if (k == 0) {
            return {0, 0};
        }
        if (even && k % 2 != 0) {
            continue;
        }
        if (k == m) {
            if (values[m - 1] < kKeepAll) {
                return {kKeepAll, m};
            }
            continue;
        }
        if (values[k - 1] < values[k]) {
            return {values[k], k};
        }
    }
}

struct BucketJob {
    std::uint64_t bucket;
    std::vector<std::size_t> key_indices;
};

}  // namespace

FlatMphf build_flat(std::span<const KeyHash> keys, const FlatConfig& cfg, FlatBuildReport* report) {
    cfg.validate();
    if (keys.empty()) {
        throw std::invalid_argument("flat: no keys");
    }
    check_distinct(keys);

    FlatMphf m;
    m.base_n = cfg.base_n;
    m.b = cfg.b;
    m.variant = cfg.variant;
    m.num_keys = keys.size();
    if (report) {
        report->buckets.clear();
        report->key_layer.assign(keys.size(), 0);
        report->key_bucket.assign(keys.size(), 0);
        report->key_position.assign(keys.size(), 0);
    }

    std::vector<std::size_t> remaining(keys.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    const bool even = cfg.variant == Variant::kBipartite;
    const double per_bucket = static_cast<double>(cfg.base_n) * cfg.bucket_load;

    // Local positions inside each bucket, resolved to global ones once all
    // offsets are known.
    std::vector<std::uint64_t> local(keys.size(), 0);

    for (std::uint32_t layer = 0; layer < cfg.max_layers && !remaining.empty(); ++layer) {
        FlatLayer fl;
        fl.bucket_count = std::max<std::uint64_t>(
            1, static_cast<std::uint64_t>(std::ceil(static_cast<double>(remaining.size()) / per_bucket)));
        fl.thresholds.assign(fl.bucket_count, 0);
        BaseCaseMphf empty;
        empty.variant = cfg.variant;
        fl.base_cases.assign(fl.bucket_count, empty);

        std::vector<std::vector<std::size_t>> members(fl.bucket_count);
        for (auto idx : remaining) {
            members[bucket_assign(keys[idx], fl.bucket_count, layer)].push_back(idx);
        }

        std::vector<std::size_t> bumped;
        std::vector<BucketJob> jobs;
        for (std::uint64_t bkt = 0; bkt < fl.bucket_count; ++bkt) {
            auto& ids = members[bkt];
            if (ids.empty()) {
                continue;
            }
            std::vector<std::uint16_t> values(ids.size());
            for (std::size_t i = 0; i < ids.size(); ++i) {
                values[i] = threshold_value(keys[ids[i]], layer);
            }
            const Selection sel = select_threshold(values, cfg.base_n, even);
            fl.thresholds[bkt] = sel.threshold;
            BucketJob job{bkt, {}};
            for (std::size_t i = 0; i < ids.size(); ++i) {
                if (values[i] < sel.threshold) {
                    job.key_indices.push_back(ids[i]);
                } else {
                    bumped.push_back(ids[i]);
                }
            }
            if (!job.key_indices.empty()) {
                jobs.push_back(std::move(job));
            }
        }

        std::vector<BucketStats> stats(jobs.size());
        detail::parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
            const auto& job = jobs[i];
            std::vector<KeyHash> bucket_keys;
            bucket_keys.reserve(job.key_indices.size());
            for (auto idx : job.key_indices) {
                bucket_keys.push_back(keys[idx]);
            }
            BaseCaseConfig bc;
            bc.n = bucket_keys.size();
            bc.b = cfg.bucket_bits(bc.n);
            bc.variant = cfg.variant;
            bc.max_seeds = cfg.max_seeds;
            BaseCaseResult result;
            try {
                result = construct_base(bucket_keys, bc);
            } catch (const ConstructionError& e) {
                throw ConstructionError("layer " + std::to_string(layer) + " bucket " +
                                            std::to_string(job.bucket) + ": " + e.what(),
                                        e.stats());
            }
            for (std::size_t k = 0; k < bucket_keys.size(); ++k) {
                local[job.key_indices[k]] = query_base(result.mphf, bucket_keys[k]);
            }
            stats[i] = {layer, job.bucket, bc.n, bc.b, result.stats};
            fl.base_cases[job.bucket] = std::move(result.mphf);
        });

        if (report) {
            for (const auto& job : jobs) {
                for (auto idx : job.key_indices) {
                    report->key_layer[idx] = layer;
                    report->key_bucket[idx] = job.bucket;
                }
            }
            report->buckets.insert(report->buckets.end(), stats.begin(), stats.end());
        }
        m.layers.push_back(std::move(fl));
        std::sort(bumped.begin(), bumped.end());
        remaining = std::move(bumped);
    }

    std::uint64_t offset = 0;
    for (auto& fl : m.layers) {
        fl.offsets.resize(fl.bucket_count);
        for (std::uint64_t bkt = 0; bkt < fl.bucket_count; ++bkt) {
            fl.offsets[bkt] = offset;
            offset += fl.base_cases[bkt].n;
        }
    }
    m.fallback_offset = offset;
    for (auto idx : remaining) {
        m.fallback.push_back(keys[idx]);
    }
    std::sort(m.fallback.begin(), m.fallback.end());

    if (report) {
        const auto layers = static_cast<std::uint32_t>(m.layers.size());
        for (auto idx : remaining) {
            report->key_layer[idx] = layers;
        }
        std::vector<char> in_fallback(keys.size(), 0);
        for (auto idx : remaining) {
            in_fallback[idx] = 1;
            const auto it = std::lower_bound(m.fallback.begin(), m.fallback.end(), keys[idx]);
            report->key_position[idx] =
                m.fallback_offset + static_cast<std::uint64_t>(it - m.fallback.begin());
        }
        for (std::size_t idx = 0; idx < keys.size(); ++idx) {
            if (!in_fallback[idx]) {
                const auto& fl = m.layers[report->key_layer[idx]];
                report->key_position[idx] = fl.offsets[report->key_bucket[idx]] + local[idx];
            }
        }
    }
    return m;
}

std::uint64_t query_flat(const FlatMphf& m, const KeyHash& kh) {
    for (std::uint32_t layer = 0; layer < m.layers.size(); ++layer) {
        const auto& fl = m.layers[layer];
        const std::uint64_t bkt = bucket_assign(kh, fl.bucket_count, layer);
        if (threshold_value(kh, layer) < fl.thresholds[bkt] && fl.base_cases[bkt].n != 0) {
            return fl.offsets[bkt] + query_base(fl.base_cases[bkt], kh);
        }
    }
    if (m.fallback.empty()) {
        return m.num_keys == 0 ? 0 : m.num_keys - 1;
    }
    const auto it = std::lower_bound(m.fallback.begin(), m.fallback.end(), kh);
    const auto idx = std::min<std::uint64_t>(static_cast<std::uint64_t>(it - m.fallback.begin()),
                                             m.fallback.size() - 1);
    return m.fallback_offset + idx;
}

// Flat payload:
//   varint base_n, varint b, u8 variant, varint num_keys, varint layer count
//   per layer:
//     varint bucket_count
//     u16 threshold per bucket
//     bucket sizes, bit_width(base_n) bits each, packed, byte padded
//     seed stream, byte padded: a 6-bit Rice parameter k_m for every bucket
//       size m in [0, base_n], then the seed code of each nonempty bucket of
//       size m as a Rice code (quotient in unary as 1s closed by a 0, then
//       the k_m low bits)
//     x vectors of nonempty buckets concatenated, packed, byte padded
//   varint fallback count, then (lo u64, hi u64) per fallback key

namespace {

constexpr unsigned kRiceParamBits = 6;

std::uint64_t rice_length(std::uint64_t v, unsigned k) { return k + 1 + (v >> k); }

// Per bucket size, the Rice parameter minimising the layer's total code length.
std::vector<unsigned> rice_params(const FlatLayer& fl, std::size_t base_n) {
    std::vector<std::vector<std::uint64_t>> by_size(base_n + 1);
    for (const auto& bc : fl.base_cases) {
        if (bc.n != 0) {
            by_size[bc.n].push_back(bc.seed_code());
        }
    }
    std::vector<unsigned> params(base_n + 1, 0);
    for (std::size_t m = 0; m <= base_n; ++m) {
        std::uint64_t best = UINT64_MAX;
        for (unsigned k = 0; k < 64 && !by_size[m].empty(); ++k) {
            std::uint64_t total = 0;
            for (auto c : by_size[m]) {
                total += rice_length(c, k);
            }
            if (total < best) {
                best = total;
                params[m] = k;
            }
        }
    }
    return params;
}

// Bits of the seed stream before padding.
std::uint64_t seed_stream_bits(const FlatLayer& fl, std::size_t base_n) {
    const auto params = rice_params(fl, base_n);
    std::uint64_t bits = kRiceParamBits * (base_n + 1);
    for (const auto& bc : fl.base_cases) {
        if (bc.n != 0) {
            bits += rice_length(bc.seed_code(), params[bc.n]);
        }
    }
    return bits;
}

}  // namespace

std::vector<std::uint8_t> serialize_flat(const FlatMphf& m) {
    ByteWriter w;
    w.varint(m.base_n);
    w.varint(m.b);
    w.u8(static_cast<std::uint8_t>(m.variant));
    w.varint(m.num_keys);
    w.varint(m.layers.size());
    const unsigned width = size_width(m.base_n);
    for (const auto& fl : m.layers) {
        w.varint(fl.bucket_count);
        for (auto t : fl.thresholds) {
            w.u16(t);
        }
        BitWriter sizes;
        for (const auto& bc : fl.base_cases) {
            sizes.put(bc.n, width);
        }
        w.bytes(sizes.bytes());
        const auto params = rice_params(fl, m.base_n);
        BitWriter seeds;
        for (auto k : params) {
            seeds.put(k, kRiceParamBits);
        }
        BitWriter xs;
        for (const auto& bc : fl.base_cases) {
            if (bc.n != 0) {
                const std::uint64_t code = bc.seed_code();
                const unsigned k = params[bc.n];
                for (std::uint64_t q = code >> k; q > 0; --q) {
                    seeds.put(1, 1);
                }
                seeds.put(0, 1);
                seeds.put(code & ((std::uint64_t{1} << k) - 1), k);
                xs.put_bits(bc.x);
            }
        }
        w.bytes(seeds.bytes());
        w.bytes(xs.bytes());
    }
    w.varint(m.fallback.size());
    for (const auto& kh : m.fallback) {
        w.u64(kh.lo);
        w.u64(kh.hi);
    }
    return write_container(SectionTag::kFlat, w.buffer());
}

FlatMphf deserialize_flat(std::span<const std::uint8_t> bytes) {
    const Section section = read_container(bytes);
    if (section.tag != SectionTag::kFlat) {
        throw ParseError(6, "expected a flat section");
    }
    ByteReader r(section.payload, section.payload_offset);
    FlatMphf m;
    const std::size_t cfg_at = r.absolute();
    m.base_n = r.varint();
    m.b = r.varint();
    const std::uint8_t variant = r.u8();
    if (m.base_n < 2 || m.base_n > 4096 || m.b > m.base_n || variant > 1) {
        throw ParseError(cfg_at, "invalid flat configuration");
    }
    m.variant = static_cast<Variant>(variant);
    m.num_keys = r.varint();
    const std::uint64_t layer_count = r.varint();
    if (layer_count > 64) {
        r.fail("implausible layer count");
    }
    FlatConfig cfg;
    cfg.base_n = m.base_n;
    cfg.b = m.b;
    cfg.variant = m.variant;
    const unsigned width = size_width(m.base_n);
    std::uint64_t offset = 0;
    for (std::uint64_t layer = 0; layer < layer_count; ++layer) {
        FlatLayer fl;
        const std::size_t count_at = r.absolute();
        fl.bucket_count = r.varint();
        if (fl.bucket_count == 0 || fl.bucket_count > m.num_keys + 1) {
            throw ParseError(count_at, "invalid bucket count");
        }
        fl.thresholds.resize(fl.bucket_count);
        for (auto& t : fl.thresholds) {
            t = r.u16();
        }
        const std::size_t sizes_at = r.absolute();
        const std::size_t size_bytes = (fl.bucket_count * width + 7) / 8;
        BitReader sizes(r.bytes(size_bytes), sizes_at);
        fl.base_cases.resize(fl.bucket_count);
        fl.offsets.resize(fl.bucket_count);
        std::uint64_t x_total = 0;
        for (std::uint64_t bkt = 0; bkt < fl.bucket_count; ++bkt) {
            auto& bc = fl.base_cases[bkt];
            bc.n = sizes.get(width);
            if (bc.n > m.base_n || (m.variant == Variant::kBipartite && bc.n % 2 != 0)) {
                throw ParseError(sizes_at, "invalid bucket size");
            }
            bc.variant = m.variant;
            bc.b = bc.n == 0 ? 0 : cfg.bucket_bits(bc.n);
            fl.offsets[bkt] = offset;
            offset += bc.n;
            x_total += bc.b;
        }
        std::uint64_t seed_bits = kRiceParamBits * (m.base_n + 1);
        const std::size_t seeds_at = r.absolute();
        // The stream length is only known after decoding, so read against the
        // rest of the payload and skip the consumed bytes afterwards.
        const std::size_t rest = section.payload.size() - r.position();
        BitReader seeds(section.payload.subspan(r.position(), rest), seeds_at);
        std::vector<unsigned> params(m.base_n + 1);
        for (auto& k : params) {
            k = static_cast<unsigned>(seeds.get(kRiceParamBits));
        }
        for (auto& bc : fl.base_cases) {
            if (bc.n == 0) {
                continue;
            }
            const unsigned k = params[bc.n];
            std::uint64_t q = 0;
            while (seeds.get(1) != 0) {
                if (++q >= (std::uint64_t{1} << 32)) {
                    throw ParseError(seeds_at, "unterminated seed code");
                }
            }
            const std::uint64_t low = seeds.get(k);
            seed_bits += q + 1 + k;
            if (k != 0 && q > (UINT64_MAX >> k)) {
                throw ParseError(seeds_at, "seed code overflows");
            }
            const std::uint64_t code = (q << k) | low;
            if (m.variant == Variant::kPlain) {
                bc.seed0 = code;
            } else {
                const auto pair = decode_seed_pair(code);
                bc.seed0 = pair.left;
                bc.seed1 = pair.right;
            }
        }
        (void)r.bytes((seed_bits + 7) / 8);
        const std::size_t xs_at = r.absolute();
        BitReader xs(r.bytes((x_total + 7) / 8), xs_at);
        for (auto& bc : fl.base_cases) {
            bc.x = xs.get_bits(bc.b);
        }
        m.layers.push_back(std::move(fl));
    }
    m.fallback_offset = offset;
    const std::size_t fb_at = r.absolute();
    const std::uint64_t fb = r.varint();
    if (offset + fb != m.num_keys) {
        throw ParseError(fb_at, "bucket sizes and fallback do not add up to the key count");
    }
    m.fallback.resize(fb);
    for (auto& kh : m.fallback) {
        kh.lo = r.u64();
        kh.hi = r.u64();
    }
    if (!r.at_end()) {
        r.fail("trailing bytes after flat structure");
    }
    return m;
}

SpaceReport space_report(const FlatMphf& m) {
    SpaceReport rep;
    rep.num_keys = m.num_keys;
    const unsigned width = size_width(m.base_n);
    std::uint64_t payload_bytes = varint_size(m.base_n) + varint_size(m.b) + 1 +
                                  varint_size(m.num_keys) + varint_size(m.layers.size());
    for (const auto& fl : m.layers) {
        payload_bytes += varint_size(fl.bucket_count);
        rep.threshold_bits += 16 * fl.bucket_count;
        payload_bytes += 2 * fl.bucket_count;
        rep.offset_bits += width * fl.bucket_count;
        payload_bytes += (width * fl.bucket_count + 7) / 8;
        const std::uint64_t sb = seed_stream_bits(fl, m.base_n);
        rep.seed_bits += sb;
        payload_bytes += (sb + 7) / 8;
        std::uint64_t x = 0;
        for (const auto& bc : fl.base_cases) {
            x += bc.n != 0 ? bc.b : 0;
        }
        rep.x_bits += x;
        payload_bytes += (x + 7) / 8;
    }
    payload_bytes += varint_size(m.fallback.size()) + 16 * m.fallback.size();
    rep.fallback_bits = 128 * m.fallback.size();
    rep.total_bits = 8 * (kContainerHeaderBytes + payload_bytes);
    rep.metadata_bits = rep.total_bits - rep.seed_bits - rep.x_bits - rep.threshold_bits -
                        rep.offset_bits - rep.fallback_bits;
    return rep;
}

SpaceReport space_report(const BaseCaseMphf& m) {
    SpaceReport rep;
    rep.num_keys = m.n;
    rep.seed_bits = 8 * varint_size(m.seed_code());
    rep.x_bits = m.b;
    const std::uint64_t payload = 1 + varint_size(m.n) + varint_size(m.b) +
                                  varint_size(m.seed_code()) + (m.b + 7) / 8;
    rep.total_bits = 8 * (kContainerHeaderBytes + payload);
    rep.metadata_bits = rep.total_bits - rep.seed_bits - rep.x_bits;
    return rep;
}

std::string SpaceReport::to_string() const {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    os << "keys        " << num_keys << "\n"
       << "seeds       " << per_key(seed_bits) << " bits/key\n"
       << "x vectors   " << per_key(x_bits) << " bits/key\n"
       << "thresholds  " << per_key(threshold_bits) << " bits/key\n"
       << "offsets     " << per_key(offset_bits) << " bits/key\n"
       << "fallback    " << per_key(fallback_bits) << " bits/key\n"
       << "metadata    " << per_key(metadata_bits) << " bits/key\n"
       << "total       " << per_key(total_bits) << " bits/key\n";
    return os.str();
}

}  // namespace morphis
