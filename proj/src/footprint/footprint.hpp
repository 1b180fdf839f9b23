#pragma once

#include <string>
#include <vector>

#include "minilang/project.hpp"

namespace bsnap::fp {

// Client-specific syntactic usage footprint: the subset of library API
// symbols referenced by client/test code.
struct Footprint {
    std::vector<std::string> symbols;  // sorted API symbol ids
    std::string fingerprint;           // project (client+test) fingerprint

    bool contains(const std::string& symbol) const;
    bool operator==(const Footprint&) const = default;
};

// Static scan over client/test ASTs. Constructor and function references are
// resolved exactly; method-call names are matched against every exported
// class declaring a method of that name (sound over-approximation).
Footprint extract_footprint(const minilang::Project& project);

// footprint.json round-trip; FormatError on version mismatch or malformed
// content. Writing is canonical: sorted symbols, two-space indent, LF endings.
void write_footprint(const Footprint& fp, const std::string& path);
Footprint read_footprint(const std::string& path);
std::string footprint_to_text(const Footprint& fp);

}  // namespace bsnap::fp
