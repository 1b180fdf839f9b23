#include "differ/differ.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"
#include "snapstore/snapstore.hpp"

using nlohmann::json;
using bsnap::rec::Interaction;
using bsnap::rec::SerializedValue;
using bsnap::rec::Snapshot;

namespace bsnap::diff {

const char* category_name(Category c) {
    switch (c) {
        case Category::ProtocolChange: return "PROTOCOL_CHANGE";
        case Category::InputChange: return "INPUT_CHANGE";
        case Category::ValueChange: return "VALUE_CHANGE";
        case Category::ExceptionChange: return "EXCEPTION_CHANGE";
        case Category::LengthChange: return "LENGTH_CHANGE";
        case Category::OutcomeChange: return "OUTCOME_CHANGE";
        case Category::MissingTest: return "MISSING_TEST";
        case Category::ExtraTest: return "EXTRA_TEST";
    }
    return "?";
}

Category category_from_name(const std::string& name) {
    static const std::map<std::string, Category> names = {
        {"PROTOCOL_CHANGE", Category::ProtocolChange},
        {"INPUT_CHANGE", Category::InputChange},
        {"VALUE_CHANGE", Category::ValueChange},
        {"EXCEPTION_CHANGE", Category::ExceptionChange},
        {"LENGTH_CHANGE", Category::LengthChange},
        {"OUTCOME_CHANGE", Category::OutcomeChange},
        {"MISSING_TEST", Category::MissingTest},
        {"EXTRA_TEST", Category::ExtraTest},
    };
    auto it = names.find(name);
    if (it == names.end()) throw FormatError("unknown category '" + name + "'");
    return it->second;
}

namespace {

// old->new object id correspondence, extended at matching first occurrences.
struct Bijection {
    std::map<std::string, std::string> fwd;
    std::map<std::string, std::string> rev;

    bool admit(const std::string& old_id, const std::string& new_id) {
        auto f = fwd.find(old_id);
        if (f != fwd.end()) return f->second == new_id;
        auto r = rev.find(new_id);
        if (r != rev.end()) return false;  // new id already claimed
        fwd.emplace(old_id, new_id);
        rev.emplace(new_id, old_id);
        return true;
    }
};

bool equivalent(const SerializedValue& a, const SerializedValue& b, Bijection& bij) {
    using Tag = SerializedValue::Tag;
    if (a.tag != b.tag) return false;
    if (a.tag == Tag::Ref)
        return a.str_v == b.str_v && bij.admit(a.str_v2, b.str_v2);
    if (a.tag == Tag::List) {
        if (a.fixed != b.fixed || a.items.size() != b.items.size()) return false;
        for (size_t i = 0; i < a.items.size(); ++i)
            if (!equivalent(a.items[i], b.items[i], bij)) return false;
        return true;
    }
    if (a.tag == Tag::Map || a.tag == Tag::Record) {
        if (a.str_v != b.str_v || a.entries.size() != b.entries.size()) return false;
        for (size_t i = 0; i < a.entries.size(); ++i) {
            if (a.entries[i].first != b.entries[i].first ||
                !equivalent(a.entries[i].second, b.entries[i].second, bij))
                return false;
        }
        return true;
    }
    return a == b;
}

// Compares one interaction pair; emits at most one finding in the fixed
// priority order: method/recv, args, result kind, result value.
std::optional<Finding> compare_interaction(const std::string& test_id,
                                           const Interaction& oi,
                                           const Interaction& ni, Bijection& bij,
                                           const CompareOptions& opts) {
    auto finding = [&](Category cat, std::optional<std::string> old_text,
                       std::optional<std::string> new_text) {
        Finding f;
        f.test_id = test_id;
        f.position = oi.seq;
        f.category = cat;
        f.method = oi.method;
        f.old_text = std::move(old_text);
        f.new_text = std::move(new_text);
        return f;
    };

    if (oi.method != ni.method) {
        Finding f = finding(Category::ProtocolChange, oi.method, ni.method);
        return f;
    }
    bool recv_ok;
    if (oi.recv.has_value() != ni.recv.has_value())
        recv_ok = false;
    else if (!oi.recv)
        recv_ok = true;
    else
        recv_ok = bij.admit(*oi.recv, *ni.recv);
    if (!recv_ok)
        return finding(Category::ProtocolChange, oi.recv ? *oi.recv : "null",
                       ni.recv ? *ni.recv : "null");

    if (oi.args.size() != ni.args.size()) {
        return finding(Category::InputChange, std::to_string(oi.args.size()) + " args",
                       std::to_string(ni.args.size()) + " args");
    }
    for (size_t i = 0; i < oi.args.size(); ++i) {
        if (!equivalent(oi.args[i], ni.args[i], bij))
            return finding(Category::InputChange, snap::canonical_encode(oi.args[i]),
                           snap::canonical_encode(ni.args[i]));
    }

    bool old_exc = oi.result.is_exc();
    bool new_exc = ni.result.is_exc();
    if (old_exc != new_exc)
        return finding(Category::ExceptionChange, snap::canonical_encode(oi.result),
                       snap::canonical_encode(ni.result));
    if (old_exc) {
        bool same = opts.exc_type_only
                        ? oi.result.str_v == ni.result.str_v
                        : oi.result == ni.result;
        if (!same)
            return finding(Category::ExceptionChange,
                           snap::canonical_encode(oi.result),
                           snap::canonical_encode(ni.result));
        return std::nullopt;
    }
    if (!equivalent(oi.result, ni.result, bij))
        return finding(Category::ValueChange, snap::canonical_encode(oi.result),
                       snap::canonical_encode(ni.result));
    return std::nullopt;
}

std::optional<Finding> tail_findings(const std::string& test_id,
                                     const Snapshot& old_snap,
                                     const Snapshot& new_snap) {
    size_t no = old_snap.interactions.size();
    size_t nn = new_snap.interactions.size();
    if (no != nn) {
        Finding f;
        f.test_id = test_id;
        f.position = static_cast<int>(std::min(no, nn)) + 1;
        f.category = Category::LengthChange;
        const auto& longer =
            no > nn ? old_snap.interactions : new_snap.interactions;
        f.method = longer[std::min(no, nn)].method;
        f.old_text = std::to_string(no) + " interactions";
        f.new_text = std::to_string(nn) + " interactions";
        return f;
    }
    if (old_snap.status != new_snap.status) {
        Finding f;
        f.test_id = test_id;
        f.position = 0;
        f.category = Category::OutcomeChange;
        f.old_text = rec::snap_status_name(old_snap.status);
        f.new_text = rec::snap_status_name(new_snap.status);
        return f;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Finding> compare_snapshots(const Snapshot& old_snap,
                                         const Snapshot& new_snap,
                                         const CompareOptions& opts) {
    if (old_snap.test_id != new_snap.test_id)
        throw TestIdMismatch("cannot compare snapshots of different tests: '" +
                             old_snap.test_id + "' vs '" + new_snap.test_id + "'");
    Bijection bij;
    size_t n = std::min(old_snap.interactions.size(), new_snap.interactions.size());
    for (size_t k = 0; k < n; ++k) {
        auto f = compare_interaction(old_snap.test_id, old_snap.interactions[k],
                                     new_snap.interactions[k], bij, opts);
        if (f) return f;
    }
    return tail_findings(old_snap.test_id, old_snap, new_snap);
}

std::vector<Finding> compare_snapshots_all(const Snapshot& old_snap,
                                           const Snapshot& new_snap,
                                           const CompareOptions& opts) {
    if (old_snap.test_id != new_snap.test_id)
        throw TestIdMismatch("cannot compare snapshots of different tests: '" +
                             old_snap.test_id + "' vs '" + new_snap.test_id + "'");
    std::vector<Finding> out;
    Bijection bij;
    size_t n = std::min(old_snap.interactions.size(), new_snap.interactions.size());
    for (size_t k = 0; k < n; ++k) {
        auto f = compare_interaction(old_snap.test_id, old_snap.interactions[k],
                                     new_snap.interactions[k], bij, opts);
        if (f) out.push_back(*f);
    }
    if (auto f = tail_findings(old_snap.test_id, old_snap, new_snap)) out.push_back(*f);
    return out;
}

Report compare_sets(const std::string& old_dir, const std::string& new_dir,
                    const std::vector<std::string>& flaky,
                    const CompareOptions& opts) {
    std::set<std::string> flaky_set(flaky.begin(), flaky.end());
    std::vector<std::string> old_tests = snap::list_snapshot_tests(old_dir);
    std::vector<std::string> new_tests = snap::list_snapshot_tests(new_dir);
    std::set<std::string> new_set(new_tests.begin(), new_tests.end());

    Report report;
    std::set<std::string> seen;
    for (const auto& id :
         std::set<std::string>(old_tests.begin(), old_tests.end())) {
        if (flaky_set.count(id)) ++report.flaky_excluded;
    }
    for (const auto& id : new_tests) {
        if (flaky_set.count(id) &&
            !std::binary_search(old_tests.begin(), old_tests.end(), id))
            ++report.flaky_excluded;
    }

    for (const auto& id : old_tests) {
        if (flaky_set.count(id)) continue;
        Snapshot old_snap;
        try {
            old_snap = snap::read_snapshot(snap::snapshot_path(old_dir, id));
        } catch (const FormatError& e) {
            throw FormatError(snap::snapshot_path(old_dir, id) + ": " + e.what());
        }
        if (report.baseline_fingerprint.empty())
            report.baseline_fingerprint = old_snap.library_fingerprint;

        if (!new_set.count(id)) {
            Finding f;
            f.test_id = id;
            f.position = 0;
            f.category = Category::MissingTest;
            f.old_text = "present";
            f.new_text = "absent";
            report.findings.push_back(std::move(f));
            continue;
        }

        snap::ParsedSnapshot parsed;
        try {
            parsed = snap::read_snapshot_allow_truncated(
                snap::snapshot_path(new_dir, id));
        } catch (const FormatError& e) {
            throw FormatError(snap::snapshot_path(new_dir, id) + ": " + e.what());
        }
        if (report.candidate_fingerprint.empty())
            report.candidate_fingerprint = parsed.snapshot.library_fingerprint;
        ++report.compared;

        std::vector<Finding> findings;
        if (parsed.truncated) {
            // A crashed recording: divergences in the recorded prefix win,
            // otherwise the truncation point itself is the protocol break.
            Bijection bij;
            size_t n = std::min(old_snap.interactions.size(),
                                parsed.snapshot.interactions.size());
            std::optional<Finding> first;
            for (size_t k = 0; k < n && !first; ++k)
                first = compare_interaction(id, old_snap.interactions[k],
                                            parsed.snapshot.interactions[k], bij,
                                            opts);
            if (!first) {
                Finding f;
                f.test_id = id;
                f.position =
                    static_cast<int>(parsed.snapshot.interactions.size()) + 1;
                f.category = Category::ProtocolChange;
                if (static_cast<size_t>(f.position) <=
                    old_snap.interactions.size())
                    f.method = old_snap.interactions[f.position - 1].method;
                f.old_text = "recording continues";
                f.new_text = "recording truncated";
                first = std::move(f);
            }
            findings.push_back(*first);
        } else if (opts.all_positions) {
            findings = compare_snapshots_all(old_snap, parsed.snapshot, opts);
        } else if (auto f = compare_snapshots(old_snap, parsed.snapshot, opts)) {
            findings.push_back(*f);
        }

        if (findings.empty())
            ++report.identical;
        else
            ++report.differing;
        for (auto& f : findings) report.findings.push_back(std::move(f));
    }

    for (const auto& id : new_tests) {
        if (flaky_set.count(id)) continue;
        if (std::binary_search(old_tests.begin(), old_tests.end(), id)) continue;
        Finding f;
        f.test_id = id;
        f.position = 0;
        f.category = Category::ExtraTest;
        f.old_text = "absent";
        f.new_text = "present";
        report.findings.push_back(std::move(f));
    }
    return report;
}

std::string render_report(const Report& r, const std::string& format) {
    if (format == "json") {
        json doc;  // nlohmann::json orders keys lexicographically
        doc["version"] = 1;
        doc["baseline"] = r.baseline_fingerprint;
        doc["candidate"] = r.candidate_fingerprint;
        doc["counts"] = {{"compared", r.compared},
                         {"identical", r.identical},
                         {"differing", r.differing},
                         {"flaky_excluded", r.flaky_excluded}};
        doc["findings"] = json::array();
        for (const auto& f : r.findings) {
            json jf;
            jf["test"] = f.test_id;
            jf["position"] = f.position;
            jf["category"] = category_name(f.category);
            jf["method"] = f.method ? json(*f.method) : json(nullptr);
            jf["old"] = f.old_text ? json(*f.old_text) : json(nullptr);
            jf["new"] = f.new_text ? json(*f.new_text) : json(nullptr);
            doc["findings"].push_back(std::move(jf));
        }
        return doc.dump() + "\n";
    }
    if (format != "text") throw Error("unknown report format '" + format + "'");

    std::string out;
    for (const auto& f : r.findings) {
        out += f.test_id + " :: " + std::to_string(f.position) + " :: " +
               category_name(f.category) + " :: " + (f.method ? *f.method : "-") +
               " :: " + (f.old_text ? *f.old_text : "-") + " -> " +
               (f.new_text ? *f.new_text : "-") + "\n";
    }
    out += std::to_string(r.findings.size()) + " finding" +
           (r.findings.size() == 1 ? "" : "s") + " across " +
           std::to_string(r.compared) + " tests\n";
    return out;
}

Report parse_report_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed report: ") + e.what());
    }
    if (!doc.contains("version") || doc["version"].get<int>() != 1)
        throw FormatError("unsupported report version");
    Report r;
    r.baseline_fingerprint = doc.value("baseline", "");
    r.candidate_fingerprint = doc.value("candidate", "");
    const auto& counts = doc.at("counts");
    r.compared = counts.value("compared", 0);
    r.identical = counts.value("identical", 0);
    r.differing = counts.value("differing", 0);
    r.flaky_excluded = counts.value("flaky_excluded", 0);
    for (const auto& jf : doc.at("findings")) {
        Finding f;
        f.test_id = jf.at("test").get<std::string>();
        f.position = jf.at("position").get<int>();
        f.category = category_from_name(jf.at("category").get<std::string>());
        if (!jf.at("method").is_null()) f.method = jf["method"].get<std::string>();
        if (!jf.at("old").is_null()) f.old_text = jf["old"].get<std::string>();
        if (!jf.at("new").is_null()) f.new_text = jf["new"].get<std::string>();
        r.findings.push_back(std::move(f));
    }
    return r;
}

}  // namespace bsnap::diff
