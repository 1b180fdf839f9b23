#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bsnap {

// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& data);

// Fingerprint of a source set: hash over the sorted (path, content) pairs.
std::string fingerprint_sources(std::vector<std::pair<std::string, std::string>> files);

}  // namespace bsnap
