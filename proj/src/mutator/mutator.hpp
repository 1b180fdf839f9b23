#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "differ/differ.hpp"
#include "footprint/footprint.hpp"
#include "minilang/project.hpp"
#include "recorder/serialized_value.hpp"

namespace bsnap::mut {

enum class DefaultMode { Null, Observed };

struct MutationTarget {
    std::string method;  // API symbol id, reached at least once in the baseline

    bool operator==(const MutationTarget&) const = default;
};

struct KillRow {
    std::string target;
    bool killed_by_tests = false;
    bool killed_by_snapshots = false;
    std::optional<diff::Finding> finding;  // first snapshot finding, if any
    std::optional<std::string> diagnostic;
};

struct KillMatrix {
    std::vector<KillRow> rows;  // target order
    int mutants() const { return static_cast<int>(rows.size()); }
    int tests_kills() const;
    int snapshot_kills() const;
};

// One target per distinct method id in the baseline interactions, sorted;
// constructors (#init) excluded.
std::vector<MutationTarget> list_targets(
    const std::map<std::string, rec::Snapshot>& baseline);

// The default literal the mutated body returns. Mode Null always yields a
// null literal; Observed keys on the unanimous result tag across baseline
// interactions of the target (int->0, float->0.0, bool->false, str->"",
// list->[], map->{}, anything else or mixed -> null).
minilang::ExprPtr infer_default(const MutationTarget& target,
                                const std::map<std::string, rec::Snapshot>& baseline,
                                DefaultMode mode);

// Copy of the project with the target's body replaced by `return <literal>;`.
// The original is untouched. Throws UnknownTarget.
minilang::Project apply_mutation(const minilang::Project& project,
                                 const MutationTarget& target,
                                 const minilang::ExprPtr& default_literal);

struct CampaignOptions {
    DefaultMode mode = DefaultMode::Null;
    int jobs = 0;  // 0 = hardware concurrency
    bool record_internal = false;
};

// The extreme-mutation evaluation protocol: one mutant per target, client
// tests and snapshot diffs as the two detectors. Precondition: every
// baseline footer is `passed`.
KillMatrix run_campaign(const minilang::Project& project,
                        const fp::Footprint& footprint,
                        const std::map<std::string, rec::Snapshot>& baseline,
                        const CampaignOptions& opts = {});

struct Scores {
    double tests = 0.0;
    double snapshots = 0.0;
};

// killed/total per detector. Throws EmptyMatrix when there are no mutants.
Scores mutation_scores(const KillMatrix& m);
std::string format_score(double score);  // 3 decimal places

// campaign.csv / campaign.json exports.
std::string kill_matrix_to_csv(const KillMatrix& m);
std::string kill_matrix_to_json(const KillMatrix& m);

}  // namespace bsnap::mut
