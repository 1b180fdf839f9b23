#pragma once

#include <optional>
#include <string>
#include <vector>

#include "recorder/serialized_value.hpp"

namespace bsnap::diff {

enum class Category {
    ProtocolChange,
    InputChange,
    ValueChange,
    ExceptionChange,
    LengthChange,
    OutcomeChange,
    MissingTest,
    ExtraTest,
};

const char* category_name(Category c);
Category category_from_name(const std::string& name);

struct Finding {
    std::string test_id;
    int position = 0;  // seq of first divergence; 0 for set-level findings
    Category category = Category::ValueChange;
    std::optional<std::string> method;
    std::optional<std::string> old_text;  // canonical encodings
    std::optional<std::string> new_text;

    bool operator==(const Finding&) const = default;
};

struct Report {
    std::string baseline_fingerprint;
    std::string candidate_fingerprint;
    std::vector<Finding> findings;
    int compared = 0;
    int identical = 0;
    int differing = 0;
    int flaky_excluded = 0;
};

struct CompareOptions {
    bool exc_type_only = false;  // relax exc comparison to the type
    bool all_positions = false;  // naive positional comparison to the end
};

// First divergence between two snapshots of the same test under the
// old->new ObjectId bijection; nullopt when equivalent. Throws TestIdMismatch.
std::optional<Finding> compare_snapshots(const rec::Snapshot& old_snap,
                                         const rec::Snapshot& new_snap,
                                         const CompareOptions& opts = {});

// All positional findings for one test pair (the --all mode).
std::vector<Finding> compare_snapshots_all(const rec::Snapshot& old_snap,
                                           const rec::Snapshot& new_snap,
                                           const CompareOptions& opts = {});

// Pairs snapshot files by test id, excluding flaky tests; unpaired tests
// yield MISSING_TEST/EXTRA_TEST; a truncated candidate yields PROTOCOL_CHANGE
// at the truncation point.
Report compare_sets(const std::string& old_dir, const std::string& new_dir,
                    const std::vector<std::string>& flaky = {},
                    const CompareOptions& opts = {});

// text: one line per finding; json: canonical, schema version 1.
std::string render_report(const Report& r, const std::string& format);
Report parse_report_json(const std::string& text);

}  // namespace bsnap::diff
