// boundary-snap: record, compare, and stress API-boundary snapshots.
//
// The tool is a thin shell over the C API in boundary_snap.h; all policy
// lives in the library.
#include <cstdio>
#include <memory>
#include <string>

#include <CLI/CLI.hpp>

#include "boundary_snap.h"

namespace {

bool g_quiet = false;

void say(const std::string& line) {
    if (!g_quiet) std::fprintf(stdout, "%s\n", line.c_str());
}

int fail(const std::string& context) {
    std::fprintf(stderr, "boundary-snap: %s: %s\n", context.c_str(),
                 bsnap_last_error());
    return 2;
}

using ProjectPtr = std::unique_ptr<bsnap_project, decltype(&bsnap_project_free)>;
using FootprintPtr =
    std::unique_ptr<bsnap_footprint, decltype(&bsnap_footprint_free)>;
using ReportPtr = std::unique_ptr<bsnap_report, decltype(&bsnap_report_free)>;
using CampaignPtr =
    std::unique_ptr<bsnap_campaign, decltype(&bsnap_campaign_free)>;

ProjectPtr load_project(const std::string& dir) {
    return ProjectPtr(bsnap_project_load(dir.c_str()), bsnap_project_free);
}

FootprintPtr read_footprint(const std::string& path) {
    return FootprintPtr(bsnap_footprint_read(path.c_str()), bsnap_footprint_free);
}

int cmd_footprint(const std::string& project_dir, const std::string& out_path) {
    ProjectPtr project = load_project(project_dir);
    if (!project) return fail("loading project");
    FootprintPtr fp(bsnap_footprint_extract(project.get()), bsnap_footprint_free);
    if (!fp) return fail("extracting footprint");
    if (bsnap_footprint_write(fp.get(), out_path.c_str()) != BSNAP_OK)
        return fail("writing " + out_path);
    say("wrote " + out_path + " (" +
        std::to_string(bsnap_footprint_symbol_count(fp.get())) + " symbols)");
    return 0;
}

int cmd_record(const std::string& project_dir, const std::string& fp_path,
               const std::string& out_dir, int runs, bool record_internal) {
    ProjectPtr project = load_project(project_dir);
    if (!project) return fail("loading project");
    FootprintPtr fp = read_footprint(fp_path);
    if (!fp) return fail("reading " + fp_path);
    size_t flaky = 0;
    if (bsnap_record(project.get(), fp.get(), out_dir.c_str(), runs,
                     record_internal ? 1 : 0, &flaky) != BSNAP_OK)
        return fail("recording");
    say("recorded " + std::to_string(bsnap_project_test_count(project.get())) +
        " tests into " + out_dir + " (" + std::to_string(flaky) +
        " flaky excluded)");
    return 0;
}

int cmd_compare(const std::string& old_dir, const std::string& new_dir,
                const std::string& format, bool all_positions,
                bool exc_type_only) {
    ReportPtr report(bsnap_compare(old_dir.c_str(), new_dir.c_str(),
                                   all_positions ? 1 : 0, exc_type_only ? 1 : 0),
                     bsnap_report_free);
    if (!report) return fail("comparing snapshot sets");
    char* rendered = bsnap_report_render(report.get(), format.c_str());
    if (!rendered) return fail("rendering report");
    if (!g_quiet) std::fputs(rendered, stdout);
    bsnap_string_free(rendered);
    return bsnap_report_finding_count(report.get()) > 0 ? 1 : 0;
}

int cmd_campaign(const std::string& project_dir, const std::string& fp_path,
                 const std::string& baseline_dir, const std::string& out_prefix,
                 const std::string& default_mode, int jobs) {
    ProjectPtr project = load_project(project_dir);
    if (!project) return fail("loading project");
    FootprintPtr fp = read_footprint(fp_path);
    if (!fp) return fail("reading " + fp_path);
    CampaignPtr campaign(
        bsnap_campaign_run(project.get(), fp.get(), baseline_dir.c_str(),
                           default_mode.c_str(), jobs),
        bsnap_campaign_free);
    if (!campaign) return fail("running campaign");
    if (bsnap_campaign_write(campaign.get(), out_prefix.c_str()) != BSNAP_OK)
        return fail("writing " + out_prefix + ".{csv,json}");

    char* scores = bsnap_campaign_scores(campaign.get());
    if (!scores) return fail("computing scores");
    size_t survivors = bsnap_campaign_survivor_count(campaign.get());
    say(std::to_string(bsnap_campaign_mutant_count(campaign.get())) +
        " mutants, " + std::to_string(survivors) + " survived both detectors");
    say(std::string("scores: ") + scores);
    bsnap_string_free(scores);
    return survivors > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Behavioral-change detection via API-boundary snapshots"};
    app.set_version_flag("--version", std::string(bsnap_version()));
    app.add_flag("--quiet,-q", g_quiet, "Suppress informational output");
    app.require_subcommand(1);

    std::string project_dir, fp_path, out_path, out_dir, out_prefix;
    std::string old_dir, new_dir, baseline_dir;
    std::string format = "text", default_mode = "null";
    int runs = 2, jobs = 0;
    bool record_internal = false, all_positions = false, exc_type_only = false;

    auto* footprint = app.add_subcommand(
        "footprint", "Extract the exported API surface of a project");
    footprint->add_option("--project", project_dir, "Project root directory")
        ->required();
    footprint->add_option("--out", out_path, "Output footprint.json path")
        ->required();

    auto* record = app.add_subcommand(
        "record", "Run the tests and write boundary snapshots");
    record->add_option("--project", project_dir, "Project root directory")
        ->required();
    record->add_option("--footprint", fp_path, "footprint.json path")->required();
    record->add_option("--out", out_dir, "Snapshot output directory")->required();
    record->add_option("--runs", runs, "Stability-filter repetitions (>= 2)");
    record->add_flag("--record-internal", record_internal,
                     "Also record library-internal calls to exported symbols");

    auto* compare =
        app.add_subcommand("compare", "Diff two snapshot directories");
    compare->add_option("--old", old_dir, "Baseline snapshot directory")
        ->required();
    compare->add_option("--new", new_dir, "Candidate snapshot directory")
        ->required();
    compare->add_option("--format", format, "Report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    compare->add_flag("--all", all_positions,
                      "Report every differing position, not just the first");
    compare->add_flag("--exc-type-only", exc_type_only,
                      "Compare exceptions by type only, ignoring messages");

    auto* campaign = app.add_subcommand(
        "campaign", "Extreme-mutation evaluation of both detectors");
    campaign->add_option("--project", project_dir, "Project root directory")
        ->required();
    campaign->add_option("--footprint", fp_path, "footprint.json path")
        ->required();
    campaign->add_option("--baseline", baseline_dir, "Baseline snapshot directory")
        ->required();
    campaign->add_option("--out", out_prefix, "Output path prefix (.csv/.json)")
        ->required();
    campaign->add_option("--default-mode", default_mode,
                         "Mutant return value: null or observed")
        ->check(CLI::IsMember({"null", "observed"}));
    campaign->add_option("--jobs", jobs, "Worker threads (0 = auto)");

    CLI11_PARSE(app, argc, argv);

    if (footprint->parsed()) return cmd_footprint(project_dir, out_path);
    if (record->parsed())
        return cmd_record(project_dir, fp_path, out_dir, runs, record_internal);
    if (compare->parsed())
        return cmd_compare(old_dir, new_dir, format, all_positions, exc_type_only);
    if (campaign->parsed())
        return cmd_campaign(project_dir, fp_path, baseline_dir, out_prefix,
                            default_mode, jobs);
    return 2;
}
