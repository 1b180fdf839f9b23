#include "recorder/recorder.hpp"

#include <algorithm>

#include "core/errors.hpp"
#include "snapstore/snapstore.hpp"

namespace bsnap::rec {

using minilang::Instance;
using minilang::InstancePtr;
using minilang::Value;

std::string ObjectIdRegistry::id_for(const InstancePtr& inst) {
    auto it = ids_.find(inst.get());
    if (it != ids_.end()) return it->second;
    std::string id = "o" + std::to_string(ids_.size() + 1);
    ids_.emplace(inst.get(), id);
    keep_alive_.push_back(inst);  // pins the address for the test's lifetime
    return id;
}

namespace {

constexpr int kSerializeDepthLimit = 256;

SerializedValue serialize_rec(const Value& value, ObjectIdRegistry& registry,
                              std::vector<const void*>& active, bool in_record) {
    if (active.size() > kSerializeDepthLimit)
        throw SerializeError("serialization depth limit exceeded");

    if (value.is_null()) return SerializedValue::null();
    if (value.is_bool()) return SerializedValue::boolean(value.as_bool());
    if (value.is_int()) return SerializedValue::integer(value.as_int());
    if (value.is_float()) return SerializedValue::floating(value.as_float());
    if (value.is_str()) return SerializedValue::str(value.as_str());
    if (value.is_exc())
        return SerializedValue::exc(value.as_exc()->type, value.as_exc()->message);

    auto enter = [&](const void* p) {
        if (std::find(active.begin(), active.end(), p) != active.end())
            throw SerializeError("cycle detected while serializing value");
        active.push_back(p);
    };

    if (value.is_list()) {
        const auto& list = *value.as_list();
        enter(&list);
        std::vector<SerializedValue> items;
        items.reserve(list.items.size());
        for (const auto& item : list.items)
            items.push_back(serialize_rec(item, registry, active, in_record));
        active.pop_back();
        return SerializedValue::list(std::move(items), list.fixed);
    }
    if (value.is_map()) {
        const auto& map = *value.as_map();
        enter(&map);
        std::vector<std::pair<std::string, SerializedValue>> entries;
        for (const auto& [k, v] : map.entries)
            entries.emplace_back(k, serialize_rec(v, registry, active, in_record));
        active.pop_back();
        return SerializedValue::map(std::move(entries));
    }

    const InstancePtr& inst = value.as_instance();
    if (inst->is_record()) {
        enter(inst.get());
        std::vector<std::pair<std::string, SerializedValue>> fields;
        for (const auto& [k, v] : inst->fields)
            fields.emplace_back(k, serialize_rec(v, registry, active, /*in_record=*/true));
        active.pop_back();
        return SerializedValue::record(inst->class_id, std::move(fields));
    }
    if (in_record)
        throw SerializeError("record instance reaches opaque reference " +
                             inst->class_id);
    return SerializedValue::ref(registry.id_for(inst), inst->class_id);
}

}  // namespace

SerializedValue serialize(const Value& value, ObjectIdRegistry& registry) {
    std::vector<const void*> active;
    return serialize_rec(value, registry, active, false);
}

uint64_t RecordingSink::on_boundary_call(const std::string& method,
                                         const Value* receiver,
                                         const std::vector<Value>& args) {
    Pending p;
    p.method = method;
    p.recorded = !filter_ || filter_->count(method) > 0;
    if (p.recorded) {
        if (receiver) {
            if (!receiver->is_instance())
                throw SerializeError("boundary receiver is not an instance");
            p.recv = registry_.id_for(receiver->as_instance());
        }
        for (const auto& a : args) p.args.push_back(serialize(a, registry_));
    }
    pending_.push_back(std::move(p));
    return pending_.size() - 1;
}

void RecordingSink::on_boundary_return(uint64_t token, const Value& result,
                                       bool is_throw) {
    if (token >= pending_.size()) throw SerializeError("probe token out of range");
    Pending p = std::move(pending_[token]);
    // Completion discipline: inner calls return before outer ones.
    if (token + 1 != pending_.size())
        throw SerializeError("boundary calls completed out of order");
    pending_.pop_back();
    if (!p.recorded) return;

    Interaction i;
    i.seq = static_cast<int>(interactions_.size()) + 1;
    i.method = std::move(p.method);
    i.recv = std::move(p.recv);
    i.args = std::move(p.args);
    if (is_throw && !result.is_exc())
        throw SerializeError("thrown boundary result is not an exception");
    i.result = serialize(result, registry_);
    interactions_.push_back(std::move(i));
}

std::vector<Interaction> RecordingSink::take_interactions() {
    return std::move(interactions_);
}

std::map<std::string, Snapshot> record_snapshots(const minilang::Project& project,
                                                 const fp::Footprint& footprint,
                                                 const RecordOptions& opts) {
    if (footprint.fingerprint != project.project_fingerprint)
        throw FingerprintMismatch(
            "footprint fingerprint does not match the project's client/test sources");

    std::set<std::string> filter(footprint.symbols.begin(), footprint.symbols.end());
    std::map<std::string, Snapshot> out;
    for (const auto& test : project.tests) {
        RecordingSink sink(&filter);
        minilang::RunOptions run;
        run.sink = &sink;
        run.record_internal = opts.record_internal;
        minilang::TestOutcome outcome = minilang::run_test(project, test.id, run);

        Snapshot s;
        s.test_id = test.id;
        s.project_fingerprint = project.project_fingerprint;
        s.library_fingerprint = project.library_fingerprint;
        // Partial interaction lists are retained when a test errors mid-run.
        s.interactions = sink.take_interactions();
        switch (outcome.status) {
            case minilang::TestStatus::Passed: s.status = SnapStatus::Passed; break;
            case minilang::TestStatus::Failed: s.status = SnapStatus::Failed; break;
            case minilang::TestStatus::Errored: s.status = SnapStatus::Errored; break;
        }
        s.detail = outcome.detail;
        out.emplace(test.id, std::move(s));
    }
    return out;
}

StabilityResult stability_filter(const minilang::Project& project,
                                 const fp::Footprint& footprint, int runs,
                                 const RecordOptions& opts,
                                 const SinkWrapper& wrapper) {
    if (runs < 2) throw Error("stability_filter requires runs >= 2");
    if (footprint.fingerprint != project.project_fingerprint)
        throw FingerprintMismatch(
            "footprint fingerprint does not match the project's client/test sources");

    std::set<std::string> filter(footprint.symbols.begin(), footprint.symbols.end());

    // Per test, canonical encodings of each run's snapshot.
    std::map<std::string, std::vector<std::string>> encodings;
    StabilityResult result;

    for (int run = 1; run <= runs; ++run) {
        for (const auto& test : project.tests) {
            RecordingSink sink(&filter);
            minilang::ProbeSink* active = &sink;
            if (wrapper) {
                if (minilang::ProbeSink* wrapped = wrapper(run, test.id, sink))
                    active = wrapped;
            }
            minilang::RunOptions ro;
            ro.sink = active;
            ro.record_internal = opts.record_internal;
            minilang::TestOutcome outcome = minilang::run_test(project, test.id, ro);

            Snapshot s;
            s.test_id = test.id;
            s.project_fingerprint = project.project_fingerprint;
            s.library_fingerprint = project.library_fingerprint;
            s.interactions = sink.take_interactions();
            switch (outcome.status) {
                case minilang::TestStatus::Passed: s.status = SnapStatus::Passed; break;
                case minilang::TestStatus::Failed: s.status = SnapStatus::Failed; break;
                case minilang::TestStatus::Errored: s.status = SnapStatus::Errored; break;
            }
            s.detail = outcome.detail;
            encodings[test.id].push_back(snap::snapshot_to_text(s));
            if (run == 1) result.first_run.emplace(test.id, std::move(s));
        }
    }

    for (const auto& test : project.tests) {
        const auto& encs = encodings[test.id];
        bool stable = std::all_of(encs.begin(), encs.end(),
                                  [&](const std::string& e) { return e == encs[0]; });
        if (stable)
            result.stable.push_back(test.id);
        else
            result.flaky.push_back(test.id);
    }
    return result;
}

}  // namespace bsnap::rec
