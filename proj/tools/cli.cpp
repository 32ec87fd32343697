#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "morphis/bench.hpp"
#include "morphis/io.hpp"
#include "morphis/keyfile.hpp"
#include "morphis/pseudoforest.hpp"

namespace morphis::cli {

namespace {

struct Failure {
    int code;
    std::string message;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Failure{kDataError, "cannot open " + path};
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Failure{kDataError, "cannot write " + path};
    }
}

std::size_t parse_size(const std::string& s) {
    std::size_t v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || s.empty()) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return v;
}

std::vector<std::string> keys_or_fail(const std::string& path, bool binary) {
    std::vector<std::string> keys;
    try {
        keys = load_keys(path, binary);
    } catch (const KeyFileError& e) {
        throw Failure{kDataError, e.what()};
    }
    if (keys.empty()) {
        throw Failure{kDataError, "no keys"};
    }
    if (const auto line = find_duplicate_line(keys)) {
        throw Failure{kDataError, "duplicate key at line " + std::to_string(line)};
    }
    return keys;
}

Variant parse_variant(const std::string& s) {
    if (s == "plain") {
        return Variant::kPlain;
    }
    if (s == "bipartite" || s == "bip") {
        return Variant::kBipartite;
    }
    throw std::invalid_argument("unknown variant '" + s + "'");
}

// Benchmark variants: plain | bipartite select both series, the suffixed
// names ("bip-shockhash", "plain-morphishash", ...) only one.
struct BenchVariant {
    Variant variant = Variant::kBipartite;
    bool shockhash = true;
    bool morphishash = true;
};

BenchVariant parse_bench_variant(const std::string& s) {
    BenchVariant bv;
    std::string base = s;
    if (const auto dash = s.find('-'); dash != std::string::npos) {
        base = s.substr(0, dash);
        const std::string which = s.substr(dash + 1);
        if (which == "shockhash") {
            bv.morphishash = false;
        } else if (which == "morphishash") {
            bv.shockhash = false;
        } else {
            throw std::invalid_argument("unknown variant '" + s + "'");
        }
    }
    bv.variant = parse_variant(base);
    return bv;
}

std::vector<std::size_t> parse_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_size(item));
    }
    if (out.empty()) {
        throw std::invalid_argument("empty list");
    }
    return out;
}

}  // namespace

std::vector<std::size_t> parse_n_list(const std::string& text, bool bipartite) {
    std::vector<std::size_t> out;
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        out = parse_list(text);
    } else {
        std::string hi_part = text.substr(dots + 2);
        std::size_t step = bipartite ? 2 : 1;
        std::size_t lo = parse_size(text.substr(0, dots));
        if (const auto colon = hi_part.find(':'); colon != std::string::npos) {
            step = parse_size(hi_part.substr(colon + 1));
            hi_part = hi_part.substr(0, colon);
        } else if (bipartite && lo % 2 != 0) {
            ++lo;
        }
        const std::size_t hi = parse_size(hi_part);
        if (step == 0 || lo > hi) {
            throw std::invalid_argument("bad range '" + text + "'");
        }
        for (std::size_t n = lo; n <= hi; n += step) {
            out.push_back(n);
        }
    }
    for (auto n : out) {
        if (n == 0) {
            throw std::invalid_argument("n must be positive");
        }
        if (bipartite && n % 2 != 0) {
            throw std::invalid_argument("bipartite needs even n, got " + std::to_string(n));
        }
    }
    return out;
}

Structure load_structure(const std::string& path) {
    const auto bytes = read_file(path);
    const Section section = read_container(bytes);
    switch (section.tag) {
        case SectionTag::kBaseCase:
            return deserialize_base(bytes);
        case SectionTag::kFlat:
            return deserialize_flat(bytes);
        case SectionTag::kColoring:
            return deserialize_coloring(bytes);
        case SectionTag::kDifferenceRetrieval:
            return deserialize_difference(bytes);
    }
    throw ParseError(6, "unknown section tag");
}

std::uint64_t structure_size(const Structure& s) {
    if (const auto* b = std::get_if<BaseCaseMphf>(&s)) {
        return b->n;
    }
    if (const auto* f = std::get_if<FlatMphf>(&s)) {
        return f->num_keys;
    }
    throw std::invalid_argument("structure is not a minimal perfect hash function");
}

std::uint64_t structure_query(const Structure& s, const KeyHash& kh) {
    if (const auto* b = std::get_if<BaseCaseMphf>(&s)) {
        return query_base(*b, kh);
    }
    if (const auto* f = std::get_if<FlatMphf>(&s)) {
        return query_flat(*f, kh);
    }
    throw std::invalid_argument("structure is not a minimal perfect hash function");
}

std::string verify_bijection(const Structure& s, std::span<const KeyHash> keys) {
    const std::uint64_t size = structure_size(s);
    if (keys.size() != size) {
        return "structure has " + std::to_string(size) + " positions, key file has " +
               std::to_string(keys.size()) + " keys";
    }
    std::vector<bool> mark(size, false);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto pos = structure_query(s, keys[i]);
        if (pos >= size) {
            return "key " + std::to_string(i + 1) + " maps out of range to " + std::to_string(pos);
        }
        if (mark[pos]) {
            return "key " + std::to_string(i + 1) + " collides at position " + std::to_string(pos);
        }
        mark[pos] = true;
    }
    return {};
}

namespace {

struct BuildArgs {
    std::string input;
    std::string output;
    bool binary = false;
    std::string variant = "bipartite";
    std::optional<std::size_t> n;
    std::optional<std::size_t> b;
    bool flat = false;
    std::size_t base_n = 64;
    double bucket_load = 1.1;
    std::size_t layers = 8;
    unsigned threads = 1;
    std::uint64_t max_seeds = std::uint64_t{1} << 24;
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
    const Variant variant = parse_variant(a.variant);
    const auto keys = keys_or_fail(a.input, a.binary);
    const auto hashes = hash_keys(keys);
    if (a.n && *a.n != keys.size()) {
        throw Failure{kDataError, "--n " + std::to_string(*a.n) + " but the key file has " +
                                      std::to_string(keys.size()) + " keys"};
    }
    std::vector<std::uint8_t> bytes;
    SpaceReport report;
    try {
        if (a.flat) {
            FlatConfig cfg;
            cfg.base_n = a.base_n;
            cfg.b = a.b ? *a.b : (a.base_n >= 2 ? a.base_n - 2 : 0);
            cfg.bucket_load = a.bucket_load;
            cfg.max_layers = a.layers;
            cfg.variant = variant;
            cfg.max_seeds = a.max_seeds;
            cfg.threads = a.threads;
            const auto m = build_flat(hashes, cfg);
            bytes = serialize_flat(m);
            report = space_report(m);
            if (!m.fallback.empty()) {
                err << "note: " << m.fallback.size() << " keys in the fallback list\n";
            }
        } else {
            BaseCaseConfig cfg;
            cfg.n = keys.size();
            cfg.b = a.b ? *a.b : std::max<std::size_t>(cfg.n >= 2 ? cfg.n - 2 : 0, variant == Variant::kBipartite);
            cfg.variant = variant;
            cfg.max_seeds = a.max_seeds;
            const auto result = construct_base(hashes, cfg);
            bytes = serialize_base(result.mphf);
            report = space_report(result.mphf);
            out << "search: " << result.stats.to_string() << "\n";
        }
    } catch (const DuplicateKeyError& e) {
        throw Failure{kDataError, std::string("hash collision between keys: ") + e.what()};
    } catch (const ConstructionError& e) {
        throw Failure{kConstructionFailure,
                      std::string("construction failed: ") + e.what() + "\nstats: " +
                          e.stats().to_string()};
    }
    write_file(a.output, bytes);
    out << "wrote " << a.output << " (" << keys.size() << " keys, " << bytes.size() << " bytes)\n"
        << report.to_string();
    return kOk;
}

int cmd_query(const std::string& path, const std::vector<std::string>& keys, std::ostream& out) {
    const Structure s = load_structure(path);
    if (const auto* c = std::get_if<CompressedColoring>(&s)) {
        for (const auto& k : keys) {
            const auto v = parse_size(k);
            if (v >= c->n_vertices) {
                throw Failure{kDataError, "vertex " + k + " out of range"};
            }
            out << (query_color(*c, static_cast<std::uint32_t>(v)) ? 1 : 0) << "\n";
        }
        return kOk;
    }
    if (const auto* d = std::get_if<DifferenceRetrieval>(&s)) {
        if (keys.size() != 2) {
            throw std::invalid_argument("difference query needs exactly two keys");
        }
        out << query_diff(*d, master_hash(std::string_view(keys[0])),
                          master_hash(std::string_view(keys[1])))
            << "\n";
        return kOk;
    }
    for (const auto& k : keys) {
        out << structure_query(s, master_hash(std::string_view(k))) << "\n";
    }
    return kOk;
}

int cmd_verify(const std::string& path, const std::string& key_path, bool binary,
               std::ostream& out) {
    const Structure s = load_structure(path);
    const auto keys = keys_or_fail(key_path, binary);
    const auto problem = verify_bijection(s, hash_keys(keys));
    if (!problem.empty()) {
        throw Failure{kDataError, "FAIL: " + problem};
    }
    out << "ok: " << keys.size() << " keys map bijectively onto [0, " << keys.size() << ")\n";
    return kOk;
}

struct BenchArgs {
    std::string n_text;
    std::string variant = "bipartite";
    std::string offsets;
    std::optional<std::size_t> b;
    std::size_t trials = 1000;
    std::size_t samples = 5000;
    std::size_t max_offset = 6;
    std::uint64_t rng_seed = 1;
    unsigned threads = 1;
    std::uint64_t max_seeds = std::uint64_t{1} << 24;
    std::string csv;
    bool timing = false;
};

int cmd_bench(const std::string& kind, const BenchArgs& a, std::ostream& out, std::ostream& err) {
    BenchOptions opts;
    opts.trials = a.trials;
    opts.rng_seed = a.rng_seed;
    opts.threads = a.threads;
    opts.max_seeds = a.max_seeds;
    opts.timing = a.timing;

    const BenchVariant bv = parse_bench_variant(a.variant);
    const bool bip = bv.variant == Variant::kBipartite;
    std::vector<BenchResult> rows;
    if (kind == "components") {
        if (!bip) {
            throw std::invalid_argument("components are sampled for the bipartite variant only");
        }
        const auto ns = parse_n_list(a.n_text.empty() ? "2..50" : a.n_text, true);
        rows = bench_components(ns, a.samples, opts);
    } else if (kind == "tradeoff") {
        for (auto n : parse_n_list(a.n_text.empty() ? "50" : a.n_text, bip)) {
            auto part = bench_tradeoff(n, a.max_offset, bv.variant, opts);
            rows.insert(rows.end(), part.begin(), part.end());
        }
    } else {
        const auto ns = parse_n_list(a.n_text.empty() ? "10,20,30" : a.n_text, bip);
        const std::string offsets = a.offsets.empty() ? (kind == "seeds" ? "3,6" : "6") : a.offsets;
        for (auto n : ns) {
            if (bv.shockhash) {
                rows.push_back(bench_series(n, {bv.variant, true, 0}, opts));
            }
            if (!bv.morphishash) {
                continue;
            }
            std::vector<std::size_t> offs;
            if (a.b) {
                if (*a.b > n) {
                    throw std::invalid_argument("--b exceeds n=" + std::to_string(n));
                }
                offs.push_back(n - *a.b);
            } else {
                offs = parse_list(offsets);
            }
            for (auto off : offs) {
                if (off <= n) {
                    rows.push_back(bench_series(n, {bv.variant, false, off}, opts));
                }
            }
        }
    }
    for (const auto& r : rows) {
        if (r.failures != 0) {
            err << "warning: " << r.variant << " n=" << r.n << " b=" << r.b << ": " << r.failures
                << " trials hit max_seeds and were excluded\n";
        }
    }
    if (a.csv.empty()) {
        write_csv(out, rows);
    } else {
        std::ofstream f(a.csv, std::ios::binary);
        write_csv(f, rows);
        if (!f) {
            throw Failure{kDataError, "cannot write " + a.csv};
        }
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"minimal perfect hashing with compressed cycle orientations"};
    app.name("morphis");
    app.require_subcommand(1);

    BuildArgs build;
    auto* b = app.add_subcommand("build", "build a structure from a key file");
    b->add_option("input", build.input, "key file")->required();
    b->add_option("-o,--output", build.output, "output file")->required();
    b->add_flag("--binary", build.binary, "u32 length-prefixed key records");
    b->add_option("--variant", build.variant, "plain or bipartite")->capture_default_str();
    b->add_option("--n", build.n, "expected key count (base case)");
    b->add_option("--b", build.b, "retrieval bits (default n-2 or base_n-2)");
    b->add_flag("--flat", build.flat, "partitioned construction for any number of keys");
    b->add_option("--base-n", build.base_n, "flat: keys per base case")->capture_default_str();
    b->add_option("--bucket-load", build.bucket_load, "flat: expected bucket fill relative to base_n")
        ->capture_default_str();
    b->add_option("--layers", build.layers, "flat: bumping layers")->capture_default_str();
    b->add_option("--threads", build.threads, "worker threads")->capture_default_str();
    b->add_option("--max-seeds", build.max_seeds, "seed search cutoff")->capture_default_str();

    std::string q_path;
    std::vector<std::string> q_keys;
    auto* q = app.add_subcommand("query", "print the position of keys");
    q->add_option("structure", q_path, "structure file")->required();
    q->add_option("keys", q_keys, "keys (vertex ids for a coloring, two keys for differences)")
        ->required();

    std::string v_path;
    std::string v_keys;
    bool v_binary = false;
    auto* v = app.add_subcommand("verify", "check that a structure is a bijection on a key file");
    v->add_option("structure", v_path, "structure file")->required();
    v->add_option("keys", v_keys, "key file")->required();
    v->add_flag("--binary", v_binary, "u32 length-prefixed key records");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo experiments, CSV output");
    bench_cmd->require_subcommand(1);
    std::string bench_kind;
    const std::pair<const char*, const char*> kinds[] = {
        {"seeds", "average successful seed per n and b"},
        {"components", "components of accepted pseudoforests"},
        {"overhead", "idealized space overhead against log2(n^n/n!)"},
        {"tradeoff", "seeds and overhead for b = n - max_offset .. n"},
    };
    for (const auto& [kind, help] : kinds) {
        auto* s = bench_cmd->add_subcommand(kind, help);
        s->add_option("--n", bench.n_text, "list a,b,c or range a..b[:step]");
        s->add_option("--variant", bench.variant,
                      "plain | bipartite, optionally suffixed -shockhash or -morphishash");
        s->add_option("--b-offsets,--offsets", bench.offsets, "comma list of n - b");
        s->add_option("--b", bench.b, "retrieval bits (overrides offsets)");
        s->add_option("--trials", bench.trials, "key sets per configuration");
        s->add_option("--samples", bench.samples, "components: pseudoforests per n");
        s->add_option("--max-offset", bench.max_offset, "tradeoff: smallest b is n - max-offset");
        s->add_option("--rng-seed", bench.rng_seed, "master seed for key generation");
        s->add_option("--threads", bench.threads, "worker threads");
        s->add_option("--max-seeds", bench.max_seeds, "seed search cutoff per trial");
        s->add_option("--csv", bench.csv, "write CSV here instead of stdout");
        s->add_flag("--timing", bench.timing, "fill wall_ms (otherwise 0)");
        s->callback([&bench_kind, kind] { bench_kind = kind; });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (b->parsed()) {
            return cmd_build(build, out, err);
        }
        if (q->parsed()) {
            return cmd_query(q_path, q_keys, out);
        }
        if (v->parsed()) {
            return cmd_verify(v_path, v_keys, v_binary, out);
        }
        return cmd_bench(bench_kind, bench, out, err);
    } catch (const Failure& f) {
        err << f.message << "\n";
        return f.code;
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return kDataError;
    } catch (const std::invalid_argument& e) {
        err << "usage: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace morphis::cli
