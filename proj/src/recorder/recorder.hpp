#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "footprint/footprint.hpp"
#include "minilang/interp.hpp"
#include "recorder/serialized_value.hpp"

namespace bsnap::rec {

// Assigns ObjectIds (o1, o2, ...) to opaque instances in first-observation
// order; one registry per test execution.
class ObjectIdRegistry {
  public:
    // Returns the id for `inst`, registering it if unseen.
    std::string id_for(const minilang::InstancePtr& inst);
    size_t size() const { return ids_.size(); }

  private:
    std::map<const minilang::Instance*, std::string> ids_;
    std::vector<minilang::InstancePtr> keep_alive_;
};

// Serializes a runtime value: scalars, lists, maps, and record instances by
// value; non-record instances as refs (deferred serialization); exceptions as
// exc(type, message). Throws SerializeError on container cycles and on record
// instances reaching opaque references.
SerializedValue serialize(const minilang::Value& value, ObjectIdRegistry& registry);

// Probe sink assembling Interactions for one test: receiver and args are
// serialized at entry, the result at exit; interactions are ordered by
// completion (inner calls first).
class RecordingSink : public minilang::ProbeSink {
  public:
    explicit RecordingSink(const std::set<std::string>* footprint_filter = nullptr)
        : filter_(footprint_filter) {}

    uint64_t on_boundary_call(const std::string& method, const minilang::Value* receiver,
                              const std::vector<minilang::Value>& args) override;
    void on_boundary_return(uint64_t token, const minilang::Value& result,
                            bool is_throw) override;

    std::vector<Interaction> take_interactions();
    const std::vector<Interaction>& interactions() const { return interactions_; }
    ObjectIdRegistry& registry() { return registry_; }

  private:
    struct Pending {
        bool recorded = false;
        std::string method;
        std::optional<std::string> recv;
        std::vector<SerializedValue> args;
    };

    const std::set<std::string>* filter_;
    ObjectIdRegistry registry_;
    std::vector<Pending> pending_;
    std::vector<Interaction> interactions_;
};

struct RecordOptions {
    bool record_internal = false;
};

// Runs all tests with fresh registries and returns one snapshot per test.
// Throws FingerprintMismatch when the footprint is stale for this project.
std::map<std::string, Snapshot> record_snapshots(const minilang::Project& project,
                                                 const fp::Footprint& footprint,
                                                 const RecordOptions& opts = {});

struct StabilityResult {
    std::vector<std::string> stable;  // test ids, deterministic order
    std::vector<std::string> flaky;
    std::map<std::string, Snapshot> first_run;  // snapshots of run 1
};

// Hook for tests: wraps the per-test sink of a given run (1-based) to inject
// nondeterminism. Returns a sink to use; ownership stays with the caller.
using SinkWrapper =
    std::function<minilang::ProbeSink*(int run, const std::string& test_id,
                                       RecordingSink& inner)>;

// Records `runs` times and flags a test flaky iff any pair of its snapshot
// canonical encodings differ byte-wise. Throws Error when runs < 2.
StabilityResult stability_filter(const minilang::Project& project,
                                 const fp::Footprint& footprint, int runs,
                                 const RecordOptions& opts = {},
                                 const SinkWrapper& wrapper = nullptr);

}  // namespace bsnap::rec
