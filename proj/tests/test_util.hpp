// Shared helpers for the test binaries: scratch directories, inline project
// construction, random value/snapshot generators, and an independent
// positional diff oracle used to cross-check the differ.
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "minilang/project.hpp"
#include "recorder/serialized_value.hpp"

namespace testutil {

namespace fs = std::filesystem;

inline std::string corpus_dir() { return BSNAP_CORPUS_DIR; }

#ifdef BSNAP_GOLDEN_DIR
inline std::string golden_dir() { return BSNAP_GOLDEN_DIR; }
#endif

class TempDir {
  public:
    TempDir() {
        static std::atomic<uint64_t> counter{0};
        auto base = fs::temp_directory_path() / "bsnap-test";
        fs::create_directories(base);
        path_ = base / (std::to_string(::getpid()) + "-" +
                        std::to_string(counter.fetch_add(1)));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    std::string sub(const std::string& rel) const { return (path_ / rel).string(); }

  private:
    fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes a one-file-per-role project under dir and returns its root.
inline std::string make_project_dir(const TempDir& dir, const std::string& lib,
                                    const std::string& client,
                                    const std::string& tests,
                                    const std::string& name = "proj") {
    fs::path root = dir.path() / name;
    write_file(root / "manifest.json",
               "{\"name\": \"" + name +
                   "\", \"library_dirs\": [\"lib\"], \"client_dirs\": "
                   "[\"client\"], \"test_dirs\": [\"tests\"]}\n");
    write_file(root / "lib" / "mylib.mlt", lib);
    write_file(root / "client" / "myclient.mlt", client);
    write_file(root / "tests" / "mytests.mlt", tests);
    return root.string();
}

// ---- random SerializedValue / Snapshot generation ----

struct ValueGen {
    std::mt19937_64 rng;
    int next_ref = 1;

    explicit ValueGen(uint64_t seed) : rng(seed) {}

    int pick(int n) { return static_cast<int>(rng() % static_cast<uint64_t>(n)); }

    double random_double() {
        switch (pick(8)) {
            case 0: return 0.0;
            case 1: return -0.0;
            case 2: return 1.0;
            case 3: return 0.1;
            case 4: return -2.5e-10;
            case 5: return 1.7976931348623157e308;
            case 6: return static_cast<double>(static_cast<int64_t>(rng()));
            default: {
                // Random finite bit pattern.
                uint64_t bits = rng();
                double d;
                __builtin_memcpy(&d, &bits, sizeof(d));
                if (!std::isfinite(d)) return 42.0;
                return d;
            }
        }
    }

    std::string random_str() {
        static const char* pool[] = {"", "a", "apple", "x y", "line\nbreak",
                                     "tab\tchar", "quote\"back\\", "k1", "k2", "zz"};
        return pool[pick(10)];
    }

    bsnap::rec::SerializedValue value(int depth = 0) {
        using V = bsnap::rec::SerializedValue;
        int max_tag = depth >= 3 ? 6 : 10;  // scalars + ref/exc only when deep
        switch (pick(max_tag)) {
            case 0: return V::null();
            case 1: return V::boolean(pick(2) == 0);
            case 2: return V::integer(static_cast<int64_t>(rng()));
            case 3: return V::floating(random_double());
            case 4: return V::str(random_str());
            case 5: return V::ref("o" + std::to_string(pick(4) + 1),
                                  "m::C" + std::to_string(pick(2)));
            case 6: return V::exc(pick(2) ? "TypeError" : "KeyError", random_str());
            case 7: {
                std::vector<V> items;
                int n = pick(4);
                for (int i = 0; i < n; ++i) items.push_back(value(depth + 1));
                return V::list(std::move(items), pick(2) == 0);
            }
            case 8: {
                std::vector<std::pair<std::string, V>> entries;
                int n = pick(3);
                for (int i = 0; i < n; ++i)
                    entries.emplace_back("k" + std::to_string(i), value(depth + 1));
                return V::map(std::move(entries));
            }
            default: {
                std::vector<std::pair<std::string, V>> fields;
                int n = pick(3);
                for (int i = 0; i < n; ++i)
                    fields.emplace_back("f" + std::to_string(i), value(depth + 1));
                return V::record("m::R" + std::to_string(pick(2)), std::move(fields));
            }
        }
    }

    // A result value that is never an exception (exceptions only via exc()).
    bsnap::rec::SerializedValue plain_value(int depth = 0) {
        auto v = value(depth);
        while (v.is_exc()) v = value(depth);
        return v;
    }

    bsnap::rec::Snapshot snapshot(const std::string& test_id, int max_len = 6) {
        bsnap::rec::Snapshot s;
        s.test_id = test_id;
        s.project_fingerprint = "p";
        s.library_fingerprint = "l";
        int n = pick(max_len + 1);
        for (int i = 0; i < n; ++i) {
            bsnap::rec::Interaction it;
            it.seq = i + 1;
            it.method = "m::f" + std::to_string(pick(3));
            if (pick(2)) it.recv = "o" + std::to_string(pick(3) + 1);
            int na = pick(3);
            for (int a = 0; a < na; ++a) it.args.push_back(value(1));
            it.result = pick(5) == 0 ? bsnap::rec::SerializedValue::exc(
                                           "TypeError", random_str())
                                     : value(1);
            s.interactions.push_back(std::move(it));
        }
        switch (pick(3)) {
            case 0: s.status = bsnap::rec::SnapStatus::Passed; break;
            case 1:
                s.status = bsnap::rec::SnapStatus::Failed;
                s.detail = "assert failed at line 3";
                break;
            default:
                s.status = bsnap::rec::SnapStatus::Errored;
                s.detail = "TypeError: boom";
                break;
        }
        return s;
    }
};

// ---- independent diff oracle ----
//
// Characterizes ref equivalence by renaming every object id to its order of
// first appearance (receiver first, then args, then result, walking values
// depth-first), then comparing positions for plain equality. Divergence is
// the first position whose normalized encodings differ; tail length and
// footer status are checked afterwards, mirroring the documented semantics
// but implemented without a bijection.
struct NormState {
    std::map<std::string, std::string> names;
    std::string norm(const std::string& id) {
        auto it = names.find(id);
        if (it != names.end()) return it->second;
        std::string fresh = "n" + std::to_string(names.size() + 1);
        names.emplace(id, fresh);
        return fresh;
    }
};

inline void normalize_value(bsnap::rec::SerializedValue& v, NormState& st) {
    if (v.tag == bsnap::rec::SerializedValue::Tag::Ref) {
        v.str_v2 = st.norm(v.str_v2);
        return;
    }
    for (auto& item : v.items) normalize_value(item, st);
    for (auto& [k, e] : v.entries) normalize_value(e, st);
}

inline bsnap::rec::Snapshot normalize_snapshot(bsnap::rec::Snapshot s) {
    NormState st;
    for (auto& it : s.interactions) {
        if (it.recv) it.recv = st.norm(*it.recv);
        for (auto& a : it.args) normalize_value(a, st);
        normalize_value(it.result, st);
    }
    return s;
}

struct OracleResult {
    bool diverges = false;
    int position = 0;  // seq of first divergence; min+1 for tail; 0 for footer
};

inline OracleResult oracle_first_divergence(const bsnap::rec::Snapshot& a,
                                            const bsnap::rec::Snapshot& b) {
    bsnap::rec::Snapshot na = normalize_snapshot(a);
    bsnap::rec::Snapshot nb = normalize_snapshot(b);
    size_t n = std::min(na.interactions.size(), nb.interactions.size());
    for (size_t i = 0; i < n; ++i) {
        const auto& x = na.interactions[i];
        const auto& y = nb.interactions[i];
        if (!(x.method == y.method && x.recv == y.recv && x.args == y.args &&
              x.result == y.result))
            return {true, static_cast<int>(i) + 1};
    }
    if (na.interactions.size() != nb.interactions.size())
        return {true, static_cast<int>(n) + 1};
    if (na.status != nb.status) return {true, 0};
    return {false, 0};
}

}  // namespace testutil
