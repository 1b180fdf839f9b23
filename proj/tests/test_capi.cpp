// Exercises the shared-library surface end to end. This binary links only
// against the C API, never the core library, so it also proves the exported
// symbol set is sufficient.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <unistd.h>

#include <boundary_snap.h>

namespace fs = std::filesystem;

namespace {

std::string corpus_dir() { return BSNAP_CORPUS_DIR; }

class TempDir {
  public:
    TempDir() {
        static std::atomic<uint64_t> counter{0};
        auto base = fs::temp_directory_path() / "bsnap-test";
        fs::create_directories(base);
        path_ = base / ("capi-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter.fetch_add(1)));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    std::string sub(const std::string& rel) const { return (path_ / rel).string(); }

  private:
    fs::path path_;
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

using ProjectPtr = std::unique_ptr<bsnap_project, decltype(&bsnap_project_free)>;
using FootprintPtr =
    std::unique_ptr<bsnap_footprint, decltype(&bsnap_footprint_free)>;
using ReportPtr = std::unique_ptr<bsnap_report, decltype(&bsnap_report_free)>;
using CampaignPtr =
    std::unique_ptr<bsnap_campaign, decltype(&bsnap_campaign_free)>;

ProjectPtr load(const std::string& root) {
    return {bsnap_project_load(root.c_str()), bsnap_project_free};
}

std::string take(char* s) {
    REQUIRE(s != nullptr);
    std::string out = s;
    bsnap_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("version string") {
    CHECK(std::string(bsnap_version()) == "1.0.0");
}

TEST_CASE("null arguments fail with a message") {
    CHECK(bsnap_project_load(nullptr) == nullptr);
    CHECK(std::string(bsnap_last_error()).size() > 0);
    CHECK(bsnap_footprint_extract(nullptr) == nullptr);
    CHECK(bsnap_footprint_read(nullptr) == nullptr);
    CHECK(bsnap_record(nullptr, nullptr, nullptr, 2, 0, nullptr) == BSNAP_ERROR);
    CHECK(bsnap_compare(nullptr, nullptr, 0, 0) == nullptr);
    CHECK(bsnap_campaign_run(nullptr, nullptr, nullptr, "null", 0) == nullptr);
    CHECK(bsnap_report_render(nullptr, "text") == nullptr);
    CHECK(bsnap_campaign_scores(nullptr) == nullptr);
    // Frees tolerate NULL.
    bsnap_project_free(nullptr);
    bsnap_footprint_free(nullptr);
    bsnap_report_free(nullptr);
    bsnap_campaign_free(nullptr);
    bsnap_string_free(nullptr);
}

TEST_CASE("a missing project reports through last_error") {
    CHECK(bsnap_project_load("/nonexistent/project") == nullptr);
    CHECK(std::string(bsnap_last_error()).find("manifest") != std::string::npos);
}

TEST_CASE("project accessors") {
    auto p = load(corpus_dir() + "/tokenizer/v1");
    REQUIRE(p);
    CHECK(bsnap_project_test_count(p.get()) == 3);
    CHECK(bsnap_project_api_symbol_count(p.get()) == 3);
}

TEST_CASE("footprint extraction, file io, and symbol access") {
    auto p = load(corpus_dir() + "/tokenizer/v1");
    REQUIRE(p);
    FootprintPtr fp{bsnap_footprint_extract(p.get()), bsnap_footprint_free};
    REQUIRE(fp);
    REQUIRE(bsnap_footprint_symbol_count(fp.get()) == 3);
    CHECK(std::string(bsnap_footprint_symbol(fp.get(), 0)) ==
          "tokenizer::StringTokenizer#getTokenList");
    CHECK(std::string(bsnap_footprint_symbol(fp.get(), 2)) ==
          "tokenizer::StringTokenizer#setDelimiter");
    CHECK(bsnap_footprint_symbol(fp.get(), 3) == nullptr);

    TempDir dir;
    auto path = dir.sub("fp.json");
    REQUIRE(bsnap_footprint_write(fp.get(), path.c_str()) == BSNAP_OK);
    FootprintPtr rt{bsnap_footprint_read(path.c_str()), bsnap_footprint_free};
    REQUIRE(rt);
    CHECK(bsnap_footprint_symbol_count(rt.get()) == 3);
}

TEST_CASE("record, compare, and campaign through the shared library") {
    auto v1 = load(corpus_dir() + "/tokenizer/v1");
    auto v2 = load(corpus_dir() + "/tokenizer/v2");
    REQUIRE(v1);
    REQUIRE(v2);
    FootprintPtr fp{bsnap_footprint_extract(v1.get()), bsnap_footprint_free};
    REQUIRE(fp);

    TempDir dir;
    auto old_dir = dir.sub("old");
    auto new_dir = dir.sub("new");

    // Fewer than two runs cannot establish stability.
    CHECK(bsnap_record(v1.get(), fp.get(), old_dir.c_str(), 1, 0, nullptr) ==
          BSNAP_ERROR);

    size_t flaky = 99;
    REQUIRE(bsnap_record(v1.get(), fp.get(), old_dir.c_str(), 2, 0, &flaky) ==
            BSNAP_OK);
    CHECK(flaky == 0);
    CHECK(fs::exists(old_dir + "/catalog_tests__fetch_products.snap.jsonl"));
    CHECK(fs::exists(old_dir + "/flaky.json"));
    REQUIRE(bsnap_record(v2.get(), fp.get(), new_dir.c_str(), 2, 0, &flaky) ==
            BSNAP_OK);

    ReportPtr report{bsnap_compare(old_dir.c_str(), new_dir.c_str(), 0, 0),
                     bsnap_report_free};
    REQUIRE(report);
    CHECK(bsnap_report_finding_count(report.get()) == 1);
    std::string text = take(bsnap_report_render(report.get(), "text"));
    CHECK(text.find("VALUE_CHANGE") != std::string::npos);
    CHECK(text.find("tokenizer::StringTokenizer#getTokenList") !=
          std::string::npos);
    CHECK(bsnap_report_render(report.get(), "yaml") == nullptr);
    CHECK(std::string(bsnap_last_error()).find("format") != std::string::npos);

    // A directory compared against itself is clean.
    ReportPtr self{bsnap_compare(old_dir.c_str(), old_dir.c_str(), 0, 0),
                   bsnap_report_free};
    REQUIRE(self);
    CHECK(bsnap_report_finding_count(self.get()) == 0);

    CampaignPtr campaign{bsnap_campaign_run(v1.get(), fp.get(), old_dir.c_str(),
                                            "observed", 2),
                         bsnap_campaign_free};
    REQUIRE(campaign);
    CHECK(bsnap_campaign_mutant_count(campaign.get()) == 2);
    CHECK(bsnap_campaign_tests_kill_count(campaign.get()) == 1);
    CHECK(bsnap_campaign_snapshot_kill_count(campaign.get()) == 2);
    CHECK(bsnap_campaign_survivor_count(campaign.get()) == 0);
    CHECK(take(bsnap_campaign_scores(campaign.get())) ==
          "tests=0.500 snapshots=1.000");

    auto prefix = dir.sub("campaign");
    REQUIRE(bsnap_campaign_write(campaign.get(), prefix.c_str()) == BSNAP_OK);
    std::string csv = slurp(prefix + ".csv");
    CHECK(csv.find("target,killed_by_tests,killed_by_snapshots,category,position") == 0);
    CHECK(csv.find("tokenizer::StringTokenizer#setDelimiter,true,true") !=
          std::string::npos);
    CHECK(slurp(prefix + ".json").find("\"mutants\":2") != std::string::npos);

    CHECK(bsnap_campaign_run(v1.get(), fp.get(), old_dir.c_str(), "weird", 0) ==
          nullptr);
}

TEST_CASE("an empty baseline directory cannot seed a campaign") {
    auto p = load(corpus_dir() + "/tokenizer/v1");
    REQUIRE(p);
    FootprintPtr fp{bsnap_footprint_extract(p.get()), bsnap_footprint_free};
    REQUIRE(fp);
    TempDir dir;
    fs::create_directories(dir.sub("empty"));
    CHECK(bsnap_campaign_run(p.get(), fp.get(), dir.sub("empty").c_str(), "null",
                             0) == nullptr);
    CHECK(std::string(bsnap_last_error()).size() > 0);
}
