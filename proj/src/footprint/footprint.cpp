#include "footprint/footprint.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"

using nlohmann::json;

namespace bsnap::fp {

namespace {

using minilang::Expr;
using minilang::Stmt;

struct Scanner {
    const minilang::Project& project;
    std::set<std::string>& out;
    // method name -> symbol ids of exported classes declaring it
    std::map<std::string, std::vector<std::string>> method_index;

    void build_method_index() {
        for (const auto& file : project.library_files) {
            for (const auto& cls : file.module->classes) {
                if (!file.module->exports.count(cls->name)) continue;
                std::string base = file.module->name + "::" + cls->name;
                for (const auto& m : cls->methods) {
                    if (m->name != "init")
                        method_index[m->name].push_back(base + "#" + m->name);
                }
            }
        }
    }

    void scan_stmts(const std::vector<minilang::StmtPtr>& stmts) {
        for (const auto& s : stmts) scan_stmt(*s);
    }

    void scan_stmt(const Stmt& s) {
        if (s.expr) scan_expr(*s.expr);
        if (s.target) scan_expr(*s.target);
        scan_stmts(s.body);
        scan_stmts(s.else_body);
    }

    void scan_expr(const Expr& e) {
        if (e.kind == Expr::Kind::Call) {
            auto it = project.library_exports.find(e.str_value);
            if (it != project.library_exports.end()) {
                if (it->second.fn)
                    out.insert(it->second.module->name + "::" + e.str_value);
                else
                    out.insert(it->second.module->name + "::" + e.str_value + "#init");
            }
        } else if (e.kind == Expr::Kind::MethodCall) {
            auto it = method_index.find(e.str_value);
            if (it != method_index.end())
                out.insert(it->second.begin(), it->second.end());
        }
        if (e.target) scan_expr(*e.target);
        if (e.rhs) scan_expr(*e.rhs);
        for (const auto& a : e.args) scan_expr(*a);
        for (const auto& [k, v] : e.entries) scan_expr(*v);
    }
};

std::string json_escape(const std::string& s) {
    std::string out;
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    return out;
}

}  // namespace

bool Footprint::contains(const std::string& symbol) const {
    return std::binary_search(symbols.begin(), symbols.end(), symbol);
}

Footprint extract_footprint(const minilang::Project& project) {
    std::set<std::string> symbols;
    Scanner scanner{project, symbols};
    scanner.build_method_index();

    auto scan_module = [&](const minilang::SourceFile& f) {
        for (const auto& fn : f.module->functions) scanner.scan_stmts(fn->body);
        for (const auto& cls : f.module->classes)
            for (const auto& m : cls->methods) scanner.scan_stmts(m->body);
        for (const auto& t : f.module->tests) scanner.scan_stmts(t->body);
    };
    for (const auto& f : project.client_files) scan_module(f);
    for (const auto& f : project.test_files) scan_module(f);

    Footprint fp;
    fp.symbols.assign(symbols.begin(), symbols.end());
    fp.fingerprint = project.project_fingerprint;
    return fp;
}

std::string footprint_to_text(const Footprint& fp) {
    std::string out = "{\n";
    out += "  \"version\": 1,\n";
    out += "  \"fingerprint\": \"" + json_escape(fp.fingerprint) + "\",\n";
    out += "  \"symbols\": [";
    if (fp.symbols.empty()) {
        out += "]\n";
    } else {
        bool first = true;
        for (const auto& s : fp.symbols) {
            out += first ? "\n" : ",\n";
            first = false;
            out += "    \"" + json_escape(s) + "\"";
        }
        out += "\n  ]\n";
    }
    out += "}\n";
    return out;
}

void write_footprint(const Footprint& fp, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write " + path);
        out << footprint_to_text(fp);
    }
    std::filesystem::rename(tmp, path);
}

Footprint read_footprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read footprint file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();

    json doc;
    try {
        doc = json::parse(ss.str());
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed footprint file: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer())
        throw FormatError("footprint file missing version");
    if (doc["version"].get<int>() != 1)
        throw FormatError("unsupported footprint version " +
                          doc["version"].dump());
    if (!doc.contains("fingerprint") || !doc["fingerprint"].is_string() ||
        !doc.contains("symbols") || !doc["symbols"].is_array())
        throw FormatError("footprint file missing fingerprint/symbols");

    Footprint fp;
    fp.fingerprint = doc["fingerprint"].get<std::string>();
    for (const auto& s : doc["symbols"]) {
        if (!s.is_string()) throw FormatError("footprint symbols must be strings");
        fp.symbols.push_back(s.get<std::string>());
    }
    if (!std::is_sorted(fp.symbols.begin(), fp.symbols.end()))
        throw FormatError("footprint symbols must be sorted");
    return fp;
}

}  // namespace bsnap::fp
