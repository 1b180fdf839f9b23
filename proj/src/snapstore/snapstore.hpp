#pragma once

#include <optional>
#include <string>
#include <vector>

#include "recorder/serialized_value.hpp"

namespace bsnap::snap {

// Deterministic, injective text encoding of a SerializedValue. Single line,
// fixed key order, no spaces outside string content, shortest round-trip
// decimals for floats.
std::string canonical_encode(const rec::SerializedValue& v);

// Inverse of canonical_encode; bit-exact for floats. Accepts any valid JSON
// spelling of the schema, so decode(encode(v)) == v always holds while
// goldens pin the exact bytes.
rec::SerializedValue canonical_decode(const std::string& text);

// One file per test: header line, one line per interaction, footer line.
std::string snapshot_to_text(const rec::Snapshot& s);

struct ParsedSnapshot {
    rec::Snapshot snapshot;
    bool truncated = false;  // file ended before the footer
};

// Throws FormatError on bad version / non-contiguous seq / malformed lines.
// A missing footer is surfaced as TruncatedSnapshot unless allow_truncated.
ParsedSnapshot parse_snapshot(const std::string& text, bool allow_truncated = false);

// `<dir>/<test-id>.snap.jsonl`, written atomically (temp file + rename).
std::string snapshot_path(const std::string& dir, const std::string& test_id);
void write_snapshot(const rec::Snapshot& s, const std::string& dir);
rec::Snapshot read_snapshot(const std::string& path);
ParsedSnapshot read_snapshot_allow_truncated(const std::string& path);

// Test ids of all *.snap.jsonl files in a directory, sorted.
std::vector<std::string> list_snapshot_tests(const std::string& dir);

}  // namespace bsnap::snap
