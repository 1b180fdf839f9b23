#include "boundary_snap.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"
#include "differ/differ.hpp"
#include "footprint/footprint.hpp"
#include "minilang/project.hpp"
#include "mutator/mutator.hpp"
#include "recorder/recorder.hpp"
#include "snapstore/snapstore.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename F>
auto guarded(F&& f, decltype(f()) on_error) -> decltype(f()) {
    try {
        return f();
    } catch (const std::exception& e) {
        set_error(e.what());
        return on_error;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<std::string> read_flaky_list(const std::string& dir) {
    fs::path path = fs::path(dir) / "flaky.json";
    if (!fs::exists(path)) return {};
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    json doc = json::parse(ss.str());
    std::vector<std::string> out;
    for (const auto& id : doc.at("flaky")) out.push_back(id.get<std::string>());
    return out;
}

}  // namespace

struct bsnap_project {
    bsnap::minilang::Project project;
};

struct bsnap_footprint {
    bsnap::fp::Footprint fp;
};

struct bsnap_report {
    bsnap::diff::Report report;
};

struct bsnap_campaign {
    bsnap::mut::KillMatrix matrix;
};

extern "C" {

const char* bsnap_version(void) { return "1.0.0"; }

const char* bsnap_last_error(void) { return g_last_error.c_str(); }

void bsnap_string_free(char* s) { std::free(s); }

bsnap_project* bsnap_project_load(const char* root_dir) {
    if (!root_dir) {
        set_error("root_dir is null");
        return nullptr;
    }
    return guarded<std::function<bsnap_project*()>>(
        [&]() -> bsnap_project* {
            auto* handle = new bsnap_project{bsnap::minilang::load_project(root_dir)};
            return handle;
        },
        nullptr);
}

void bsnap_project_free(bsnap_project* p) { delete p; }

size_t bsnap_project_test_count(const bsnap_project* p) {
    return p ? p->project.tests.size() : 0;
}

size_t bsnap_project_api_symbol_count(const bsnap_project* p) {
    return p ? p->project.api_symbols.size() : 0;
}

bsnap_footprint* bsnap_footprint_extract(const bsnap_project* p) {
    if (!p) {
        set_error("project is null");
        return nullptr;
    }
    return guarded<std::function<bsnap_footprint*()>>(
        [&]() -> bsnap_footprint* {
            return new bsnap_footprint{bsnap::fp::extract_footprint(p->project)};
        },
        nullptr);
}

bsnap_footprint* bsnap_footprint_read(const char* path) {
    if (!path) {
        set_error("path is null");
        return nullptr;
    }
    return guarded<std::function<bsnap_footprint*()>>(
        [&]() -> bsnap_footprint* {
            return new bsnap_footprint{bsnap::fp::read_footprint(path)};
        },
        nullptr);
}

bsnap_status bsnap_footprint_write(const bsnap_footprint* fp, const char* path) {
    if (!fp || !path) {
        set_error("null argument");
        return BSNAP_ERROR;
    }
    return guarded<std::function<bsnap_status()>>(
        [&]() -> bsnap_status {
            bsnap::fp::write_footprint(fp->fp, path);
            return BSNAP_OK;
        },
        BSNAP_ERROR);
}

void bsnap_footprint_free(bsnap_footprint* fp) { delete fp; }

size_t bsnap_footprint_symbol_count(const bsnap_footprint* fp) {
    return fp ? fp->fp.symbols.size() : 0;
}

const char* bsnap_footprint_symbol(const bsnap_footprint* fp, size_t i) {
    if (!fp || i >= fp->fp.symbols.size()) return nullptr;
    return fp->fp.symbols[i].c_str();
}

bsnap_status bsnap_record(const bsnap_project* p, const bsnap_footprint* fp,
                          const char* out_dir, int runs, int record_internal,
                          size_t* flaky_count_out) {
    if (!p || !fp || !out_dir) {
        set_error("null argument");
        return BSNAP_ERROR;
    }
    if (runs < 2) {
        set_error("record requires runs >= 2");
        return BSNAP_ERROR;
    }
    return guarded<std::function<bsnap_status()>>(
        [&]() -> bsnap_status {
            bsnap::rec::RecordOptions opts;
            opts.record_internal = record_internal != 0;
            bsnap::rec::StabilityResult result =
                bsnap::rec::stability_filter(p->project, fp->fp, runs, opts);

            fs::create_directories(out_dir);
            for (const auto& id : result.stable)
                bsnap::snap::write_snapshot(result.first_run.at(id), out_dir);

            json flaky = {{"version", 1}, {"flaky", result.flaky}};
            fs::path flaky_path = fs::path(out_dir) / "flaky.json";
            std::ofstream out(flaky_path, std::ios::binary);
            if (!out) throw bsnap::Error("cannot write " + flaky_path.string());
            out << flaky.dump() << "\n";

            if (flaky_count_out) *flaky_count_out = result.flaky.size();
            return BSNAP_OK;
        },
        BSNAP_ERROR);
}

bsnap_report* bsnap_compare(const char* old_dir, const char* new_dir,
                            int all_positions, int exc_type_only) {
    if (!old_dir || !new_dir) {
        set_error("null argument");
        return nullptr;
    }
    return guarded<std::function<bsnap_report*()>>(
        [&]() -> bsnap_report* {
            std::vector<std::string> flaky = read_flaky_list(old_dir);
            for (auto& id : read_flaky_list(new_dir)) flaky.push_back(std::move(id));
            bsnap::diff::CompareOptions opts;
            opts.all_positions = all_positions != 0;
            opts.exc_type_only = exc_type_only != 0;
            return new bsnap_report{
                bsnap::diff::compare_sets(old_dir, new_dir, flaky, opts)};
        },
        nullptr);
}

void bsnap_report_free(bsnap_report* r) { delete r; }

size_t bsnap_report_finding_count(const bsnap_report* r) {
    return r ? r->report.findings.size() : 0;
}

char* bsnap_report_render(const bsnap_report* r, const char* format) {
    if (!r || !format) {
        set_error("null argument");
        return nullptr;
    }
    return guarded<std::function<char*()>>(
        [&]() -> char* {
            return dup_string(bsnap::diff::render_report(r->report, format));
        },
        nullptr);
}

bsnap_campaign* bsnap_campaign_run(const bsnap_project* p, const bsnap_footprint* fp,
                                   const char* baseline_dir, const char* default_mode,
                                   int jobs) {
    if (!p || !fp || !baseline_dir || !default_mode) {
        set_error("null argument");
        return nullptr;
    }
    return guarded<std::function<bsnap_campaign*()>>(
        [&]() -> bsnap_campaign* {
            std::string mode(default_mode);
            bsnap::mut::CampaignOptions opts;
            if (mode == "null")
                opts.mode = bsnap::mut::DefaultMode::Null;
            else if (mode == "observed")
                opts.mode = bsnap::mut::DefaultMode::Observed;
            else
                throw bsnap::Error("unknown default mode '" + mode + "'");
            opts.jobs = jobs;

            std::map<std::string, bsnap::rec::Snapshot> baseline;
            for (const auto& id : bsnap::snap::list_snapshot_tests(baseline_dir)) {
                baseline.emplace(id, bsnap::snap::read_snapshot(
                                         bsnap::snap::snapshot_path(baseline_dir, id)));
            }
            if (baseline.empty())
                throw bsnap::EmptyMatrix("no baseline snapshots in " +
                                         std::string(baseline_dir));

            bsnap::mut::KillMatrix matrix =
                bsnap::mut::run_campaign(p->project, fp->fp, baseline, opts);
            if (matrix.rows.empty())
                throw bsnap::EmptyMatrix("campaign produced zero mutation targets");
            return new bsnap_campaign{std::move(matrix)};
        },
        nullptr);
}

void bsnap_campaign_free(bsnap_campaign* c) { delete c; }

size_t bsnap_campaign_mutant_count(const bsnap_campaign* c) {
    return c ? c->matrix.rows.size() : 0;
}

size_t bsnap_campaign_tests_kill_count(const bsnap_campaign* c) {
    return c ? static_cast<size_t>(c->matrix.tests_kills()) : 0;
}

size_t bsnap_campaign_snapshot_kill_count(const bsnap_campaign* c) {
    return c ? static_cast<size_t>(c->matrix.snapshot_kills()) : 0;
}

size_t bsnap_campaign_survivor_count(const bsnap_campaign* c) {
    if (!c) return 0;
    size_t n = 0;
    for (const auto& r : c->matrix.rows)
        if (!r.killed_by_tests && !r.killed_by_snapshots) ++n;
    return n;
}

bsnap_status bsnap_campaign_write(const bsnap_campaign* c, const char* out_prefix) {
    if (!c || !out_prefix) {
        set_error("null argument");
        return BSNAP_ERROR;
    }
    return guarded<std::function<bsnap_status()>>(
        [&]() -> bsnap_status {
            std::string prefix(out_prefix);
            fs::path parent = fs::path(prefix).parent_path();
            if (!parent.empty()) fs::create_directories(parent);
            {
                std::ofstream csv(prefix + ".csv", std::ios::binary);
                if (!csv) throw bsnap::Error("cannot write " + prefix + ".csv");
                csv << bsnap::mut::kill_matrix_to_csv(c->matrix);
            }
            {
                std::ofstream js(prefix + ".json", std::ios::binary);
                if (!js) throw bsnap::Error("cannot write " + prefix + ".json");
                js << bsnap::mut::kill_matrix_to_json(c->matrix);
            }
            return BSNAP_OK;
        },
        BSNAP_ERROR);
}

char* bsnap_campaign_scores(const bsnap_campaign* c) {
    if (!c) {
        set_error("null argument");
        return nullptr;
    }
    return guarded<std::function<char*()>>(
        [&]() -> char* {
            bsnap::mut::Scores s = bsnap::mut::mutation_scores(c->matrix);
            return dup_string("tests=" + bsnap::mut::format_score(s.tests) +
                              " snapshots=" + bsnap::mut::format_score(s.snapshots));
        },
        nullptr);
}

}  // extern "C"
