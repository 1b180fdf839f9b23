#include "mutator/mutator.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"
#include "core/sha256.hpp"
#include "minilang/printer.hpp"
#include "recorder/recorder.hpp"

using nlohmann::json;
using bsnap::minilang::ClassDecl;
using bsnap::minilang::Expr;
using bsnap::minilang::ExprPtr;
using bsnap::minilang::FunctionDecl;
using bsnap::minilang::Module;
using bsnap::minilang::Project;
using bsnap::minilang::Stmt;
using bsnap::rec::SerializedValue;
using bsnap::rec::Snapshot;

namespace bsnap::mut {

int KillMatrix::tests_kills() const {
    return static_cast<int>(
        std::count_if(rows.begin(), rows.end(),
                      [](const KillRow& r) { return r.killed_by_tests; }));
}

int KillMatrix::snapshot_kills() const {
    return static_cast<int>(
        std::count_if(rows.begin(), rows.end(),
                      [](const KillRow& r) { return r.killed_by_snapshots; }));
}

std::vector<MutationTarget> list_targets(
    const std::map<std::string, Snapshot>& baseline) {
    std::set<std::string> methods;
    for (const auto& [id, snap] : baseline) {
        for (const auto& i : snap.interactions) {
            // Mutating allocation is not a "return default" change.
            if (i.method.size() >= 5 &&
                i.method.compare(i.method.size() - 5, 5, "#init") == 0)
                continue;
            methods.insert(i.method);
        }
    }
    std::vector<MutationTarget> out;
    for (const auto& m : methods) out.push_back(MutationTarget{m});
    return out;
}

namespace {

ExprPtr literal(Expr::Kind kind) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    return e;
}

}  // namespace

minilang::ExprPtr infer_default(const MutationTarget& target,
                                const std::map<std::string, Snapshot>& baseline,
                                DefaultMode mode) {
    if (mode == DefaultMode::Null) return literal(Expr::Kind::NullLit);

    std::optional<SerializedValue::Tag> unanimous;
    bool mixed = false;
    bool seen = false;
    for (const auto& [id, snap] : baseline) {
        for (const auto& i : snap.interactions) {
            if (i.method != target.method) continue;
            seen = true;
            if (!unanimous)
                unanimous = i.result.tag;
            else if (*unanimous != i.result.tag)
                mixed = true;
        }
    }
    if (!seen)
        throw Error("observed default mode requires a baseline interaction for " +
                    target.method);
    if (mixed || !unanimous) return literal(Expr::Kind::NullLit);

    switch (*unanimous) {
        case SerializedValue::Tag::Int: return literal(Expr::Kind::IntLit);
        case SerializedValue::Tag::Float: return literal(Expr::Kind::FloatLit);
        case SerializedValue::Tag::Bool: return literal(Expr::Kind::BoolLit);
        case SerializedValue::Tag::Str: return literal(Expr::Kind::StrLit);
        case SerializedValue::Tag::List: return literal(Expr::Kind::ListLit);
        case SerializedValue::Tag::Map: return literal(Expr::Kind::MapLit);
        default: return literal(Expr::Kind::NullLit);
    }
}

Project apply_mutation(const Project& project, const MutationTarget& target,
                       const ExprPtr& default_literal) {
    std::string mod_name, decl_name, method_name;
    size_t sep = target.method.find("::");
    if (sep == std::string::npos) throw UnknownTarget("bad target id: " + target.method);
    mod_name = target.method.substr(0, sep);
    std::string rest = target.method.substr(sep + 2);
    size_t hash = rest.find('#');
    if (hash == std::string::npos) {
        decl_name = rest;
    } else {
        decl_name = rest.substr(0, hash);
        method_name = rest.substr(hash + 1);
    }

    auto ret = std::make_shared<Stmt>();
    ret->kind = Stmt::Kind::Return;
    ret->expr = default_literal;

    auto mutate_fn = [&](const FunctionDecl& fn) {
        auto clone = std::make_shared<FunctionDecl>();
        clone->name = fn.name;
        clone->params = fn.params;
        clone->line = fn.line;
        clone->col = fn.col;
        clone->body = {ret};
        return clone;
    };

    Project mutated = project;
    for (auto& file : mutated.library_files) {
        if (file.module->name != mod_name) continue;
        auto new_mod = std::make_shared<Module>(*file.module);
        bool found = false;
        if (method_name.empty()) {
            for (auto& fn : new_mod->functions) {
                if (fn->name == decl_name) {
                    fn = mutate_fn(*fn);
                    found = true;
                    break;
                }
            }
        } else {
            for (auto& cls : new_mod->classes) {
                if (cls->name != decl_name) continue;
                auto new_cls = std::make_shared<ClassDecl>(*cls);
                for (auto& m : new_cls->methods) {
                    if (m->name == method_name) {
                        m = mutate_fn(*m);
                        found = true;
                        break;
                    }
                }
                if (found) cls = new_cls;
                break;
            }
        }
        if (!found) break;

        file.module = new_mod;
        // Keep source text and library fingerprint consistent with the AST.
        file.content = minilang::pretty_print(*new_mod);
        std::vector<std::pair<std::string, std::string>> lib_srcs;
        for (const auto& f : mutated.library_files)
            lib_srcs.emplace_back(f.relpath, f.content);
        mutated.library_fingerprint = fingerprint_sources(std::move(lib_srcs));
        mutated.rebuild_index();
        return mutated;
    }
    throw UnknownTarget("no such mutation target: " + target.method);
}

namespace {

KillRow evaluate_target(const Project& project, const fp::Footprint& footprint,
                        const std::map<std::string, Snapshot>& baseline,
                        const MutationTarget& target, const CampaignOptions& opts) {
    KillRow row;
    row.target = target.method;
    try {
        ExprPtr def = infer_default(target, baseline, opts.mode);
        Project mutated = apply_mutation(project, target, def);
        rec::RecordOptions rec_opts;
        rec_opts.record_internal = opts.record_internal;
        std::map<std::string, Snapshot> mutant =
            rec::record_snapshots(mutated, footprint, rec_opts);

        for (const auto& [id, snap] : mutant) {
            if (snap.status != rec::SnapStatus::Passed) {
                row.killed_by_tests = true;
                break;
            }
        }

        for (const auto& [id, base_snap] : baseline) {
            auto it = mutant.find(id);
            if (it == mutant.end()) {
                diff::Finding f;
                f.test_id = id;
                f.category = diff::Category::MissingTest;
                row.finding = std::move(f);
                break;
            }
            if (auto f = diff::compare_snapshots(base_snap, it->second)) {
                row.finding = std::move(f);
                break;
            }
        }
        row.killed_by_snapshots = row.finding.has_value();
    } catch (const Error& e) {
        row.diagnostic = e.what();
        row.killed_by_snapshots = row.finding.has_value();
    }
    return row;
}

}  // namespace

KillMatrix run_campaign(const Project& project, const fp::Footprint& footprint,
                        const std::map<std::string, Snapshot>& baseline,
                        const CampaignOptions& opts) {
    for (const auto& [id, snap] : baseline) {
        if (snap.status != rec::SnapStatus::Passed)
            throw Error("baseline snapshot for '" + id +
                        "' did not pass; campaign requires a green baseline");
    }

    std::vector<MutationTarget> targets = list_targets(baseline);
    KillMatrix matrix;
    matrix.rows.resize(targets.size());

    unsigned jobs = opts.jobs > 0 ? static_cast<unsigned>(opts.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, std::max<size_t>(targets.size(), 1));

    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t idx = next.fetch_add(1);
            if (idx >= targets.size()) return;
            matrix.rows[idx] =
                evaluate_target(project, footprint, baseline, targets[idx], opts);
        }
    };
    if (jobs <= 1 || targets.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return matrix;
}

Scores mutation_scores(const KillMatrix& m) {
    if (m.rows.empty()) throw EmptyMatrix("mutation score over zero mutants");
    Scores s;
    s.tests = static_cast<double>(m.tests_kills()) / m.mutants();
    s.snapshots = static_cast<double>(m.snapshot_kills()) / m.mutants();
    return s;
}

std::string format_score(double score) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", score);
    return buf;
}

std::string kill_matrix_to_csv(const KillMatrix& m) {
    std::string out = "target,killed_by_tests,killed_by_snapshots,category,position\n";
    for (const auto& r : m.rows) {
        out += r.target;
        out += r.killed_by_tests ? ",true" : ",false";
        out += r.killed_by_snapshots ? ",true" : ",false";
        out.push_back(',');
        if (r.finding) out += diff::category_name(r.finding->category);
        out.push_back(',');
        if (r.finding) out += std::to_string(r.finding->position);
        out.push_back('\n');
    }
    return out;
}

std::string kill_matrix_to_json(const KillMatrix& m) {
    json doc;
    doc["version"] = 1;
    doc["totals"] = {{"mutants", m.mutants()},
                     {"killed_by_tests", m.tests_kills()},
                     {"killed_by_snapshots", m.snapshot_kills()}};
    doc["rows"] = json::array();
    for (const auto& r : m.rows) {
        json jr;
        jr["target"] = r.target;
        jr["killed_by_tests"] = r.killed_by_tests;
        jr["killed_by_snapshots"] = r.killed_by_snapshots;
        jr["category"] =
            r.finding ? json(diff::category_name(r.finding->category)) : json(nullptr);
        jr["position"] = r.finding ? json(r.finding->position) : json(nullptr);
        jr["test"] = r.finding ? json(r.finding->test_id) : json(nullptr);
        jr["diagnostic"] = r.diagnostic ? json(*r.diagnostic) : json(nullptr);
        doc["rows"].push_back(std::move(jr));
    }
    return doc.dump() + "\n";
}

}  // namespace bsnap::mut
