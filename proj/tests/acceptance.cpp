// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "morphis/appendix.hpp"
#include "morphis/base_case.hpp"
#include "morphis/bench.hpp"
#include "morphis/flat.hpp"
#include "morphis/pseudoforest.hpp"
#include "test_support.hpp"

using namespace morphis;
using namespace morphis::test;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [miss: " << what << "]";
        }
    }
};

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

bool within_rel(double value, double target, double rel) {
    return std::abs(value - target) <= rel * target;
}

std::string fmt(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

BenchResult series(std::size_t n, bool shockhash, std::size_t offset, std::size_t trials) {
    BenchOptions opts;
    opts.trials = trials;
    return bench_series(n, {Variant::kBipartite, shockhash, offset}, opts);
}

void seed_counts(Outcome& o) {
    struct Target {
        std::size_t n;
        bool shockhash;
        std::size_t offset;
        double expected;
    };
    const Target targets[] = {
        {10, true, 0, 3.99},   {20, true, 0, 17.35},  {30, true, 0, 71.10}, {10, false, 3, 7.26},
        {20, false, 3, 29.40}, {10, false, 6, 18.15}, {20, false, 6, 69.45}, {30, false, 6, 287.0},
    };
    for (const auto& t : targets) {
        const auto r = series(t.n, t.shockhash, t.offset, t.n <= 20 ? 2000 : 1000);
        const std::string name = (t.shockhash ? "shockhash" : "b=n-" + std::to_string(t.offset)) +
                                 " n=" + std::to_string(t.n);
        o.detail << " " << name << ":" << fmt(r.avg_seed, 2);
        o.require(r.failures == 0 && within_rel(r.avg_seed, t.expected, 0.10), name);
    }
}

void retry_factor(Outcome& o) {
    for (std::size_t n : {20, 30, 40}) {
        const std::size_t trials = n == 40 ? 500 : 1000;
        const auto base = series(n, true, 0, trials);
        const auto slow = series(n, false, 6, trials);
        const double factor = slow.avg_seed / base.avg_seed;
        o.detail << " n=" << n << ":" << fmt(factor, 2);
        o.require(factor >= 3.0 && factor <= 5.0, "factor at n=" + std::to_string(n));
    }
}

void component_counts(Outcome& o) {
    BenchOptions opts;
    const std::size_t small[] = {2, 10, 30};
    const auto rows = bench_components(small, 5000, opts);
    const double expected[] = {1.0, 1.214, 1.442};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        o.detail << " n=" << rows[i].n << ":" << fmt(rows[i].avg_components, 4);
        o.require(rows[i].trials == 5000 && within(rows[i].avg_components, expected[i], 0.02),
                  "n=" + std::to_string(rows[i].n));
    }
    const std::size_t large[] = {50};
    const auto big = bench_components(large, 1000, opts);
    o.detail << " n=50:" << fmt(big[0].avg_components, 4);
    o.require(big[0].trials == 1000 && within(big[0].avg_components, 1.561, 0.05), "n=50");
}

void overheads(Outcome& o) {
    BenchOptions opts;
    opts.trials = 1000;
    const auto shock = bench_overhead(50, {Variant::kBipartite, true, 0}, opts);
    const auto m50 = bench_overhead(50, {Variant::kBipartite, false, 6}, opts);
    const auto m54 = bench_overhead(54, {Variant::kBipartite, false, 6}, opts);
    o.detail << " shockhash n=50:" << fmt(shock.overhead_bits) << " b=n-6 n=50:"
             << fmt(m50.overhead_bits) << " b=n-6 n=54:" << fmt(m54.overhead_bits);
    o.require(within(shock.overhead_bits, 2.03, 0.3), "shockhash");
    o.require(within(m50.overhead_bits, 0.118, 0.15), "b=n-6 n=50");
    o.require(within(m54.overhead_bits, 0.107, 0.15), "b=n-6 n=54");
}

void tradeoff_shape(Outcome& o) {
    BenchOptions opts;
    opts.trials = 2000;
    const auto rows = bench_tradeoff(50, 6, Variant::kBipartite, opts);
    // rows: b = 44 .. 50, then the ShockHash baseline
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        o.detail << " b=" << rows[i].b << ":" << fmt(rows[i].avg_seed, 1) << "/"
                 << fmt(rows[i].overhead_bits);
    }
    o.detail << " shockhash:" << fmt(rows.back().avg_seed, 1);
    for (std::size_t i = 0; i + 2 < rows.size(); ++i) {
        const auto& fewer = rows[i];
        const auto& more = rows[i + 1];
        o.require(fewer.overhead_bits < more.overhead_bits,
                  "overhead at b=" + std::to_string(fewer.b));
        o.require(fewer.avg_seed > more.avg_seed, "seeds at b=" + std::to_string(fewer.b));
    }
    o.require(rows[rows.size() - 2].avg_seed > rows.back().avg_seed, "b=n above shockhash");
}

void oracle_equivalence(Outcome& o) {
    std::mt19937_64 rng(6);
    std::size_t instances = 0;
    std::size_t forests = 0;
    std::size_t solutions = 0;
    std::size_t bad[4] = {0, 0, 0, 0};
    for (; instances < 10000; ++instances) {
        const auto variant = instances % 2 == 0 ? Variant::kPlain : Variant::kBipartite;
        std::size_t n = 1 + rng() % 10;
        if (variant == Variant::kBipartite) {
            n += n % 2;
        }
        const auto keys = random_keys(rng, n);
        const auto g = build_graph(keys, rng() % 1000, rng() % 1000, n, variant);
        const bool forest = is_pseudoforest(g);
        forests += forest ? 1 : 0;

        bad[0] += forest != orientation_exists(g) ? 1 : 0;

        const auto a = incidence_matrix(g);
        const auto d = compute_d(g);
        bad[1] += gf2_solve(a, d).has_value() != forest ? 1 : 0;

        bad[3] += n - gf2_rank(a) < dfs_components(n, g.u, g.v) ? 1 : 0;

        const std::size_t b = 1 + rng() % n;
        const std::uint64_t rseed = rng();
        std::vector<BitVector> rows;
        for (const auto& k : keys) {
            rows.push_back(retrieval_row(k, rseed, b));
        }
        const auto ah = accumulate_ah(g, rows);
        auto xs = all_gf2_solutions(ah, d);
        if (const auto x = gf2_solve(ah, d)) {
            xs.push_back(*x);
        }
        for (const auto& x : xs) {
            BitVector y(n);
            for (std::size_t j = 0; j < n; ++j) {
                y.set(j, dot(rows[j], x));
            }
            ++solutions;
            bad[2] += indegrees_all_one(g, y) ? 0 : 1;
        }
    }
    o.detail << " instances:" << instances << " pseudoforests:" << forests
             << " solutions checked:" << solutions;
    o.require(bad[0] == 0, "(a) " + std::to_string(bad[0]));
    o.require(bad[1] == 0, "(b) " + std::to_string(bad[1]));
    o.require(bad[2] == 0, "(c) " + std::to_string(bad[2]));
    o.require(bad[3] == 0, "(d) " + std::to_string(bad[3]));
}

void bijectivity_and_space(Outcome& o) {
    std::mt19937_64 rng(7);
    std::size_t base_failures = 0;
    for (int t = 0; t < 1000; ++t) {
        BaseCaseConfig cfg;
        cfg.variant = t % 2 == 0 ? Variant::kPlain : Variant::kBipartite;
        cfg.n = 8 + rng() % 33;
        if (cfg.variant == Variant::kBipartite) {
            cfg.n -= cfg.n % 2;
        }
        cfg.b = cfg.n - rng() % 5;
        const auto keys = random_keys(rng, cfg.n);
        const auto m = deserialize_base(serialize_base(construct_base(keys, cfg).mphf));
        base_failures += cli::verify_bijection(cli::Structure{m}, keys).empty() ? 0 : 1;
    }
    o.detail << " base cases failing:" << base_failures;
    o.require(base_failures == 0, "base cases");

    FlatConfig cfg;
    cfg.base_n = 64;
    cfg.b = 60;
    for (std::size_t n : {1000, 100000, 1000000}) {
        const auto keys = random_keys(rng, n);
        FlatBuildReport report;
        const auto built = build_flat(keys, cfg, &report);
        const auto m = deserialize_flat(serialize_flat(built));
        const auto problem = cli::verify_bijection(cli::Structure{m}, keys);
        o.require(problem.empty(), "flat N=" + std::to_string(n) + " " + problem);
        if (n != 1000000) {
            continue;
        }
        const auto rep = space_report(m);
        const double total = rep.per_key(rep.total_bits);
        const double payload = rep.per_key(rep.seed_bits + rep.x_bits);

        // idealized: per bucket b_m + log2 of the mean seed code of buckets with m keys
        std::map<std::size_t, std::pair<double, std::size_t>> by_size;
        double ideal_bits = 0;
        for (const auto& bs : report.buckets) {
            if (bs.size == 0) {
                continue;
            }
            auto& [sum, count] = by_size[bs.size];
            sum += static_cast<double>(bs.stats.seed_code);
            ++count;
            ideal_bits += static_cast<double>(bs.b);
        }
        for (const auto& [size, acc] : by_size) {
            const double mean = acc.first / static_cast<double>(acc.second);
            ideal_bits += static_cast<double>(acc.second) * std::log2(std::max(1.0, mean));
        }
        const double ideal = ideal_bits / static_cast<double>(n);
        o.detail << " N=1e6 total:" << fmt(total, 4) << " bits/key payload:" << fmt(payload, 4)
                 << " idealized:" << fmt(ideal, 4);
        o.require(total <= 1.85, "total space");
        o.require(within(payload, ideal, 0.08), "payload vs idealized");
    }
}

void appendix_apps(Outcome& o) {
    std::mt19937_64 rng(8);
    std::size_t improper = 0;
    std::size_t wrong_size = 0;
    double retries = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + rng() % 200;
        const auto side = random_bits(rng, n);
        std::vector<Edge> edges;
        const std::size_t m = rng() % (2 * n + 1);
        for (std::size_t tries = 0; edges.size() < m && tries < 50 * m; ++tries) {
            const auto a = static_cast<std::uint32_t>(rng() % n);
            const auto b = static_cast<std::uint32_t>(rng() % n);
            if (side.get(a) != side.get(b)) {
                edges.emplace_back(a, b);
            }
        }
        std::vector<std::uint32_t> u;
        std::vector<std::uint32_t> v;
        for (const auto& [a, b] : edges) {
            u.push_back(a);
            v.push_back(b);
        }
        const auto built = build_two_coloring(n, edges, side, rng());
        retries += static_cast<double>(built.retries);  // not part of the serialized form
        const auto c = deserialize_coloring(serialize_coloring(built));
        for (const auto& [a, b] : edges) {
            improper += query_color(c, a) == query_color(c, b) ? 1 : 0;
        }
        wrong_size += c.payload_bits() != n - dfs_components(n, u, v) ? 1 : 0;
    }
    o.detail << " improper edges:" << improper << " wrong sizes:" << wrong_size
             << " mean retries:" << fmt(retries / 1000.0);
    o.require(improper == 0 && wrong_size == 0, "coloring");
    o.require(retries / 1000.0 < 8.0, "retries");

    std::size_t wrong_pairs = 0;
    std::size_t wrong_payload = 0;
    const std::uint64_t primes[] = {5, 7, 11, 13};
    for (int t = 0; t < 100; ++t) {
        const std::uint64_t p = primes[t % 4];
        const std::size_t n = 1 + rng() % 12;
        const auto keys = random_keys(rng, n);
        std::vector<std::uint64_t> f(n);
        for (auto& x : f) {
            x = rng() % p;
        }
        const auto d = deserialize_difference(serialize_difference(build_difference_retrieval(keys, f, p, rng())));
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                wrong_pairs += query_diff(d, keys[a], keys[b]) != (f[a] + p - f[b]) % p ? 1 : 0;
            }
        }
        const auto digits = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(p))));
        wrong_payload += d.payload_bits() != (n - 1) * digits ? 1 : 0;
    }
    o.detail << " difference pairs wrong:" << wrong_pairs << " payloads wrong:" << wrong_payload;
    o.require(wrong_pairs == 0 && wrong_payload == 0, "difference retrieval");
}

void determinism(Outcome& o) {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "morphis_acceptance_csv";
    fs::create_directories(dir);
    const std::vector<std::vector<std::string>> commands = {
        {"bench", "seeds", "--n", "10,20", "--trials", "300", "--rng-seed", "42", "--threads", "2"},
        {"bench", "components", "--n", "2..20", "--samples", "500", "--rng-seed", "42"},
        {"bench", "overhead", "--n", "20", "--trials", "300", "--rng-seed", "42"},
        {"bench", "tradeoff", "--n", "20", "--trials", "300", "--rng-seed", "42"},
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
    };
    for (const auto& cmd : commands) {
        std::string outputs[2];
        for (int run = 0; run < 2; ++run) {
            const auto path = dir / ("run" + std::to_string(run) + ".csv");
            auto args = cmd;
            args.insert(args.end(), {"--csv", path.string()});
            std::ostringstream out;
            std::ostringstream err;
            o.require(cli::run(args, out, err) == 0, cmd[1] + " exit " + err.str());
            outputs[run] = slurp(path);
        }
        o.detail << " " << cmd[1] << ":" << outputs[0].size() << "B";
        o.require(!outputs[0].empty() && outputs[0] == outputs[1], cmd[1] + " differs");
    }
    fs::remove_all(dir);
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"1 seed counts", seed_counts},
        {"2 retry factor", retry_factor},
        {"3 component counts", component_counts},
        {"4 space overheads", overheads},
        {"5 tradeoff shape at n=50", tradeoff_shape},
        {"6 oracle equivalence", oracle_equivalence},
        {"7 bijectivity and space", bijectivity_and_space},
        {"8 appendix applications", appendix_apps},
        {"9 CSV determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            check(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s (%.1fs):%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
