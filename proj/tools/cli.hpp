#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "morphis/appendix.hpp"
#include "morphis/base_case.hpp"
#include "morphis/flat.hpp"

namespace morphis::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDataError = 2,
    kConstructionFailure = 3,
};

using Structure = std::variant<BaseCaseMphf, FlatMphf, CompressedColoring, DifferenceRetrieval>;

[[nodiscard]] Structure load_structure(const std::string& path);

/// Size of the output range of an MPHF structure; throws for the appendix ones.
[[nodiscard]] std::uint64_t structure_size(const Structure& s);
[[nodiscard]] std::uint64_t structure_query(const Structure& s, const KeyHash& kh);

/// Empty when every key lands on a distinct position in range and all
/// positions are covered; otherwise a description of the first problem.
[[nodiscard]] std::string verify_bijection(const Structure& s, std::span<const KeyHash> keys);

/// Parses "a..b", "a..b:step" or "a,b,c". For bipartite ranges without an
/// explicit step the step is 2 and the start is rounded up to even.
[[nodiscard]] std::vector<std::size_t> parse_n_list(const std::string& text, bool bipartite);

/// argv-style entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace morphis::cli
