#include "morphis/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "morphis/base_case.hpp"
#include "parallel.hpp"

namespace morphis {

std::string Series::name() const {
    std::string prefix = variant == Variant::kPlain ? "plain-" : "bip-";
    return prefix + (shockhash ? "shockhash" : "morphishash");
}

double log2_mphf_bound(std::size_t n) {
    const double dn = static_cast<double>(n);
    return (dn * std::log(dn) - std::lgamma(dn + 1.0)) / std::log(2.0);
}

std::vector<KeyHash> bench_keys(std::uint64_t rng_seed, std::size_t n, std::size_t trial) {
    std::mt19937_64 rng(mix64(rng_seed ^ mix64(n ^ mix64(trial + 0x51ed270b27a4d6c3ULL))));
    std::vector<KeyHash> keys(n);
    for (auto& k : keys) {
        k.hi = rng();
        k.lo = rng();
    }
    return keys;
}

namespace {

struct TrialOutcome {
    bool ok = false;
    SearchStats stats;
};

struct Accumulator {
    std::size_t count = 0;
    std::size_t failures = 0;
    double seed = 0;
    double seed_sq = 0;
    double pairs = 0;
    double components = 0;

    void add(const TrialOutcome& t) {
        if (!t.ok) {
            ++failures;
            return;
        }
        ++count;
        const double s = static_cast<double>(t.stats.successful_seed);
        seed += s;
        seed_sq += s * s;
        pairs += static_cast<double>(t.stats.seed_code);
        components += static_cast<double>(t.stats.components);
    }

    void finish(BenchResult& r, std::size_t charged_bits) const {
        r.trials = count;
        r.failures = failures;
        if (count == 0) {
            return;
        }
        const double c = static_cast<double>(count);
        r.avg_seed = seed / c;
        r.avg_pairs = pairs / c;
        r.avg_components = components / c;
        const double var = count > 1 ? (seed_sq - seed * seed / c) / (c - 1) : 0.0;
        r.stderr_seed = std::sqrt(std::max(0.0, var) / c);
        r.overhead_bits = std::log2(std::max(1.0, r.avg_pairs)) + static_cast<double>(charged_bits) -
                          log2_mphf_bound(r.n);
    }
};

template <typename Fn>
std::vector<TrialOutcome> run_trials(std::size_t trials, unsigned threads, Fn&& fn) {
    std::vector<TrialOutcome> out(trials);
    detail::parallel_for(trials, threads, [&](std::size_t t) {
        try {
            out[t] = {true, fn(t)};
        } catch (const ConstructionError&) {
            out[t] = {false, {}};
        }
    });
    return out;
}

void check_n(std::size_t n, Variant variant) {
    if (n == 0) {
        throw std::invalid_argument("bench: n must be positive");
    }
    if (variant == Variant::kBipartite && n % 2 != 0) {
        throw std::invalid_argument("bench: bipartite needs even n, got " + std::to_string(n));
    }
}

}  // namespace

BenchResult bench_series(std::size_t n, const Series& series, const BenchOptions& opts) {
    check_n(n, series.variant);
    if (opts.trials == 0) {
        throw std::invalid_argument("bench: trials must be >= 1");
    }
    if (!series.shockhash && series.b_offset > n) {
        throw std::invalid_argument("bench: b offset exceeds n");
    }
    BaseCaseConfig cfg;
    cfg.n = n;
    cfg.b = series.bits(n);
    cfg.variant = series.variant;
    cfg.max_seeds = opts.max_seeds;

    const auto start = std::chrono::steady_clock::now();
    auto outcomes = run_trials(opts.trials, opts.threads, [&](std::size_t t) {
        const auto keys = bench_keys(opts.rng_seed, n, t);
        return series.shockhash ? shockhash_stats_base(keys, cfg) : construct_base(keys, cfg).stats;
    });
    BenchResult r;
    r.variant = series.name();
    r.n = n;
    r.b = cfg.b;
    Accumulator acc;
    for (const auto& o : outcomes) {
        acc.add(o);
    }
    acc.finish(r, cfg.b);
    if (opts.timing) {
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                        .count();
    }
    return r;
}

std::vector<BenchResult> bench_seed_counts(std::span<const std::size_t> n_values,
                                           std::span<const std::size_t> b_offsets, Variant variant,
                                           const BenchOptions& opts) {
    std::vector<BenchResult> rows;
    for (auto n : n_values) {
        rows.push_back(bench_series(n, {variant, true, 0}, opts));
        for (auto off : b_offsets) {
            if (off <= n) {
                rows.push_back(bench_series(n, {variant, false, off}, opts));
            }
        }
    }
    return rows;
}

std::vector<BenchResult> bench_components(std::span<const std::size_t> n_values, std::size_t samples,
                                          const BenchOptions& opts) {
    if (samples == 0) {
        throw std::invalid_argument("bench: samples must be >= 1");
    }
    std::vector<BenchResult> rows;
    for (auto n : n_values) {
        BenchOptions o = opts;
        o.trials = samples;
        BenchResult r = bench_series(n, {Variant::kBipartite, true, 0}, o);
        r.variant = "bip-components";
        rows.push_back(r);
    }
    return rows;
}

BenchResult bench_overhead(std::size_t n, const Series& series, const BenchOptions& opts) {
    return bench_series(n, series, opts);
}

std::vector<BenchResult> bench_tradeoff(std::size_t n, std::size_t max_offset, Variant variant,
                                        const BenchOptions& opts) {
    std::vector<BenchResult> rows;
    for (std::size_t off = std::min(max_offset, n) + 1; off-- > 0;) {
        rows.push_back(bench_series(n, {variant, false, off}, opts));
    }
    rows.push_back(bench_series(n, {variant, true, 0}, opts));
    return rows;
}

void write_csv(std::ostream& out, std::span<const BenchResult> rows) {
    out << kCsvHeader << '\n';
    char line[512];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%s,%zu,%zu,%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.3f\n",
                      r.variant.c_str(), r.n, r.b, r.trials, r.avg_seed, r.avg_pairs,
                      r.avg_components, r.overhead_bits, r.stderr_seed, r.wall_ms);
        out << line;
    }
}

}  // namespace morphis
