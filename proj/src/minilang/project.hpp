#pragma once

#include <map>
#include <string>
#include <vector>

#include "minilang/ast.hpp"

namespace bsnap::minilang {

struct SourceFile {
    std::string relpath;  // forward-slash path relative to the project root
    std::string content;
    ModulePtr module;
};

struct TestRef {
    std::string id;  // "<file-stem>__<test-name>"
    std::string file_relpath;
    TestPtr decl;
    ModulePtr module;
};

// A resolved top-level declaration (exactly one of fn/cls is set).
struct DeclRef {
    ModulePtr module;
    FunctionPtr fn;
    ClassPtr cls;
};

struct Project {
    std::string name;
    std::vector<SourceFile> library_files;
    std::vector<SourceFile> client_files;
    std::vector<SourceFile> test_files;

    std::string project_fingerprint;  // over client + test sources
    std::string library_fingerprint;  // over library sources

    // Derived index (rebuild_index).
    std::vector<std::string> api_symbols;            // sorted symbol ids
    std::map<std::string, DeclRef> library_exports;  // bare exported name
    std::map<std::string, DeclRef> library_locals;   // any library decl (link check)
    std::map<std::string, DeclRef> client_globals;   // bare client-module decl name
    std::vector<TestRef> tests;                      // deterministic order

    void rebuild_index();

    const TestRef* find_test(const std::string& id) const;

    // "mod::Class" id for a class declared in `module`.
    static std::string class_id(const Module& mod, const ClassDecl& cls) {
        return mod.name + "::" + cls.name;
    }
};

// Loads manifest.json from `root`, parses all listed sources, resolves
// cross-module references (LinkError on undeclared/unexported targets),
// and computes fingerprints.
Project load_project(const std::string& root);

// Test id used for snapshot filenames and pairing: file stem + "__" + the
// test's name with non [A-Za-z0-9_-] characters replaced by '_'.
std::string make_test_id(const std::string& file_relpath, const std::string& test_name);

}  // namespace bsnap::minilang
