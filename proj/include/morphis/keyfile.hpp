#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "morphis/hash.hpp"

namespace morphis {

class KeyFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One key per line. Exactly one trailing '\n' is stripped from each line;
/// a missing newline on the last line is accepted. Nothing else is touched.
[[nodiscard]] std::vector<std::string> read_text_keys(std::istream& in);

/// Records of a u32 little-endian length followed by that many bytes.
[[nodiscard]] std::vector<std::string> read_binary_keys(std::istream& in);

void write_binary_keys(std::ostream& out, const std::vector<std::string>& keys);

[[nodiscard]] std::vector<std::string> load_keys(const std::string& path, bool binary);

/// 1-based record number of the first key that repeats an earlier one, or 0.
[[nodiscard]] std::size_t find_duplicate_line(const std::vector<std::string>& keys);

[[nodiscard]] std::vector<KeyHash> hash_keys(const std::vector<std::string>& keys);

}  // namespace morphis
