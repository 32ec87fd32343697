#pragma once

// Monte-Carlo drivers for seed counts, component counts and space overhead
// of the base case. Every trial draws its own random key set from
// (rng_seed, n, trial), so all series at the same n see the same keys.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "morphis/hash.hpp"

namespace morphis {

struct BenchOptions {
    std::size_t trials = 1000;
    std::uint64_t rng_seed = 1;
    unsigned threads = 1;
    std::uint64_t max_seeds = std::uint64_t{1} << 24;
    /// Record wall_ms; otherwise it is written as 0 so CSVs stay reproducible.
    bool timing = false;
};

/// One benchmark series: the ShockHash baseline (accept the first
/// pseudoforest, store n orientation bits) or MorphisHash with b = n - offset.
struct Series {
    Variant variant = Variant::kBipartite;
    bool shockhash = false;
    std::size_t b_offset = 0;

    [[nodiscard]] std::string name() const;
    [[nodiscard]] std::size_t bits(std::size_t n) const { return shockhash ? n : n - b_offset; }
};

struct BenchResult {
    std::string variant;
    std::size_t n = 0;
    std::size_t b = 0;
    /// Successful trials, the ones that enter the averages.
    std::size_t trials = 0;
    std::size_t failures = 0;
    /// Mean raw index of the successful seed (bipartite: the newer seed of the pair).
    double avg_seed = 0;
    /// Mean stored seed code; for bipartite the triangular rank of the pair.
    double avg_pairs = 0;
    double avg_components = 0;
    /// log2(max(1, avg_pairs)) + b - log2(n^n / n!).
    double overhead_bits = 0;
    double stderr_seed = 0;
    double wall_ms = 0;
};

/// log2(n^n / n!), via lgamma.
[[nodiscard]] double log2_mphf_bound(std::size_t n);

/// Key set of one trial.
[[nodiscard]] std::vector<KeyHash> bench_keys(std::uint64_t rng_seed, std::size_t n,
                                               std::size_t trial);

[[nodiscard]] BenchResult bench_series(std::size_t n, const Series& series, const BenchOptions& opts);

/// Per n: the ShockHash baseline, then one row per offset (skipped if offset > n).
[[nodiscard]] std::vector<BenchResult> bench_seed_counts(std::span<const std::size_t> n_values,
                                                         std::span<const std::size_t> b_offsets,
                                                         Variant variant, const BenchOptions& opts);

/// Components of the first pseudoforest found by the bipartite ShockHash
/// search, averaged over `samples` key sets (opts.trials is ignored).
[[nodiscard]] std::vector<BenchResult> bench_components(std::span<const std::size_t> n_values,
                                                        std::size_t samples,
                                                        const BenchOptions& opts);

[[nodiscard]] BenchResult bench_overhead(std::size_t n, const Series& series,
                                         const BenchOptions& opts);

/// b = n - max_offset .. n in increasing order, then the ShockHash row.
[[nodiscard]] std::vector<BenchResult> bench_tradeoff(std::size_t n, std::size_t max_offset,
                                                      Variant variant, const BenchOptions& opts);

inline constexpr const char* kCsvHeader =
    "variant,n,b,trials,avg_seed,avg_pairs,avg_components,overhead_bits,stderr_seed,wall_ms";

void write_csv(std::ostream& out, std::span<const BenchResult> rows);

}  // namespace morphis
