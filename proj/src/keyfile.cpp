#include "morphis/keyfile.hpp"

#include <array>
#include <fstream>
#include <string_view>
#include <unordered_set>

namespace morphis {

std::vector<std::string> read_text_keys(std::istream& in) {
    std::vector<std::string> keys;
    std::string line;
    while (std::getline(in, line)) {
        keys.push_back(std::move(line));
        line.clear();
    }
    return keys;
}

std::vector<std::string> read_binary_keys(std::istream& in) {
    std::vector<std::string> keys;
    std::size_t offset = 0;
    std::array<unsigned char, 4> len_bytes{};
    while (in.read(reinterpret_cast<char*>(len_bytes.data()), 4)) {
        const std::uint32_t len = len_bytes[0] | (len_bytes[1] << 8) | (len_bytes[2] << 16) |
                                  (std::uint32_t{len_bytes[3]} << 24);
        std::string key(len, '\0');
        if (!in.read(key.data(), len)) {
            throw KeyFileError("truncated record " + std::to_string(keys.size() + 1) + " at byte " +
                               std::to_string(offset));
        }
        offset += 4 + len;
        keys.push_back(std::move(key));
    }
    if (in.gcount() != 0) {
        throw KeyFileError("truncated length prefix at byte " + std::to_string(offset));
    }
    return keys;
}

void write_binary_keys(std::ostream& out, const std::vector<std::string>& keys) {
    for (const auto& k : keys) {
        const auto len = static_cast<std::uint32_t>(k.size());
        const char prefix[4] = {static_cast<char>(len), static_cast<char>(len >> 8),
                                static_cast<char>(len >> 16), static_cast<char>(len >> 24)};
        out.write(prefix, 4);
        out.write(k.data(), static_cast<std::streamsize>(k.size()));
    }
}

std::vector<std::string> load_keys(const std::string& path, bool binary) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw KeyFileError("cannot open " + path);
    }
    return binary ? read_binary_keys(in) : read_text_keys(in);
}

std::size_t find_duplicate_line(const std::vector<std::string>& keys) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (!seen.insert(keys[i]).second) {
            return i + 1;
        }
    }
    return 0;
}

std::vector<KeyHash> hash_keys(const std::vector<std::string>& keys) {
    std::vector<KeyHash> out;
    out.reserve(keys.size());
    for (const auto& k : keys) {
        out.push_back(master_hash(std::string_view(k)));
    }
    return out;
}

}  // namespace morphis
