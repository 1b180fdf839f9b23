#include "minilang/project.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"
#include "core/sha256.hpp"
#include "minilang/builtins.hpp"
#include "minilang/parser.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace bsnap::minilang {

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ManifestError("cannot read file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string stem_of(const std::string& relpath) {
    return fs::path(relpath).stem().string();
}

// Collects .mlt files under root/<dir>, sorted by relative path.
std::vector<std::string> list_sources(const fs::path& root, const std::string& dir) {
    fs::path abs = root / dir;
    if (!fs::exists(abs))
        throw ManifestError("manifest lists missing directory: " + dir);
    std::vector<std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(abs)) {
        if (entry.is_regular_file() && entry.path().extension() == ".mlt") {
            out.push_back(fs::relative(entry.path(), root).generic_string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct LinkChecker {
    const Project& project;
    const Module& mod;
    const std::string& relpath;

    void check_stmts(const std::vector<StmtPtr>& stmts) {
        for (const auto& s : stmts) check_stmt(*s);
    }

    void check_stmt(const Stmt& s) {
        if (s.expr) check_expr(*s.expr);
        if (s.target) check_expr(*s.target);
        check_stmts(s.body);
        check_stmts(s.else_body);
    }

    void check_expr(const Expr& e) {
        if (e.kind == Expr::Kind::Call) resolve_call(e);
        if (e.target) check_expr(*e.target);
        if (e.rhs) check_expr(*e.rhs);
        for (const auto& a : e.args) check_expr(*a);
        for (const auto& [k, v] : e.entries) check_expr(*v);
    }

    void resolve_call(const Expr& e) {
        const std::string& name = e.str_value;
        if (is_builtin(name)) return;
        if (mod.find_function(name) || mod.find_class(name)) return;
        if (mod.kind != ModuleKind::Library && project.client_globals.count(name))
            return;
        if (project.library_exports.count(name)) return;
        if (project.library_locals.count(name))
            throw LinkError(relpath + ": reference to unexported library symbol '" +
                            name + "'");
        throw LinkError(relpath + ": reference to undeclared symbol '" + name + "'");
    }
};

}  // namespace

std::string make_test_id(const std::string& file_relpath, const std::string& test_name) {
    std::string id = stem_of(file_relpath) + "__";
    for (char c : test_name) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '_' || c == '-';
        id.push_back(ok ? c : '_');
    }
    return id;
}

void Project::rebuild_index() {
    api_symbols.clear();
    library_exports.clear();
    library_locals.clear();
    client_globals.clear();
    tests.clear();

    for (const auto& file : library_files) {
        const auto& mod = file.module;
        for (const auto& fn : mod->functions) {
            if (library_locals.count(fn->name))
                throw LinkError("duplicate library declaration '" + fn->name + "'");
            library_locals[fn->name] = DeclRef{mod, fn, nullptr};
            if (mod->exports.count(fn->name)) {
                library_exports[fn->name] = DeclRef{mod, fn, nullptr};
                api_symbols.push_back(mod->name + "::" + fn->name);
            }
        }
        for (const auto& cls : mod->classes) {
            if (library_locals.count(cls->name))
                throw LinkError("duplicate library declaration '" + cls->name + "'");
            library_locals[cls->name] = DeclRef{mod, nullptr, cls};
            if (mod->exports.count(cls->name)) {
                library_exports[cls->name] = DeclRef{mod, nullptr, cls};
                std::string base = mod->name + "::" + cls->name;
                api_symbols.push_back(base + "#init");
                for (const auto& m : cls->methods) {
                    if (m->name != "init") api_symbols.push_back(base + "#" + m->name);
                }
            }
        }
    }
    std::sort(api_symbols.begin(), api_symbols.end());

    for (const auto& file : client_files) {
        const auto& mod = file.module;
        for (const auto& fn : mod->functions) {
            if (client_globals.count(fn->name))
                throw LinkError("duplicate client declaration '" + fn->name + "'");
            client_globals[fn->name] = DeclRef{mod, fn, nullptr};
        }
        for (const auto& cls : mod->classes) {
            if (client_globals.count(cls->name))
                throw LinkError("duplicate client declaration '" + cls->name + "'");
            client_globals[cls->name] = DeclRef{mod, nullptr, cls};
        }
    }

    std::set<std::string> seen_ids;
    for (const auto& file : test_files) {  // already sorted by relpath
        for (const auto& t : file.module->tests) {
            TestRef ref;
            ref.id = make_test_id(file.relpath, t->name);
            ref.file_relpath = file.relpath;
            ref.decl = t;
            ref.module = file.module;
            if (!seen_ids.insert(ref.id).second)
                throw ManifestError("duplicate test id '" + ref.id + "'");
            tests.push_back(std::move(ref));
        }
    }
}

const TestRef* Project::find_test(const std::string& id) const {
    for (const auto& t : tests)
        if (t.id == id) return &t;
    return nullptr;
}

Project load_project(const std::string& root_str) {
    fs::path root(root_str);
    fs::path manifest_path = root / "manifest.json";
    if (!fs::exists(manifest_path))
        throw ManifestError("manifest.json not found in " + root_str);

    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
        throw ManifestError(std::string("invalid manifest.json: ") + e.what());
    }
    for (const char* key : {"name", "library_dirs", "client_dirs", "test_dirs"}) {
        if (!manifest.contains(key))
            throw ManifestError(std::string("manifest.json missing key '") + key + "'");
    }
    if (!manifest["name"].is_string())
        throw ManifestError("manifest 'name' must be a string");

    Project project;
    project.name = manifest["name"].get<std::string>();

    auto load_dir_set = [&](const char* key, ModuleKind kind,
                            std::vector<SourceFile>& out) {
        if (!manifest[key].is_array())
            throw ManifestError(std::string("manifest '") + key + "' must be an array");
        std::vector<std::string> paths;
        for (const auto& d : manifest[key]) {
            if (!d.is_string())
                throw ManifestError(std::string("manifest '") + key +
                                    "' entries must be strings");
            for (auto& p : list_sources(root, d.get<std::string>())) paths.push_back(p);
        }
        std::sort(paths.begin(), paths.end());
        std::set<std::string> stems;
        for (const auto& rel : paths) {
            SourceFile f;
            f.relpath = rel;
            f.content = read_file(root / rel);
            std::string mod_name = stem_of(rel);
            if (!stems.insert(mod_name).second)
                throw ManifestError("duplicate module name '" + mod_name + "'");
            f.module = parse_module(f.content, mod_name, kind);
            out.push_back(std::move(f));
        }
    };

    load_dir_set("library_dirs", ModuleKind::Library, project.library_files);
    load_dir_set("client_dirs", ModuleKind::Client, project.client_files);
    load_dir_set("test_dirs", ModuleKind::Test, project.test_files);

    std::vector<std::pair<std::string, std::string>> lib_srcs, client_srcs;
    for (const auto& f : project.library_files) lib_srcs.emplace_back(f.relpath, f.content);
    for (const auto& f : project.client_files)
        client_srcs.emplace_back(f.relpath, f.content);
    for (const auto& f : project.test_files)
        client_srcs.emplace_back(f.relpath, f.content);
    project.library_fingerprint = fingerprint_sources(std::move(lib_srcs));
    project.project_fingerprint = fingerprint_sources(std::move(client_srcs));

    project.rebuild_index();

    auto check_module = [&](const SourceFile& f) {
        LinkChecker checker{project, *f.module, f.relpath};
        for (const auto& fn : f.module->functions) checker.check_stmts(fn->body);
        for (const auto& cls : f.module->classes)
            for (const auto& m : cls->methods) checker.check_stmts(m->body);
        for (const auto& t : f.module->tests) checker.check_stmts(t->body);
    };
    for (const auto& f : project.library_files) check_module(f);
    for (const auto& f : project.client_files) check_module(f);
    for (const auto& f : project.test_files) check_module(f);

    return project;
}

}  // namespace bsnap::minilang
