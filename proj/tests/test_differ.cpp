#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/errors.hpp"
#include "differ/differ.hpp"
#include "snapstore/snapstore.hpp"
#include "test_util.hpp"

using namespace bsnap;
using namespace bsnap::diff;
using rec::Interaction;
using rec::SerializedValue;
using rec::Snapshot;
using rec::SnapStatus;
using testutil::TempDir;

namespace {

Snapshot base_snapshot() {
    Snapshot s;
    s.test_id = "t__case";
    s.project_fingerprint = "pf";
    s.library_fingerprint = "lf-old";
    Interaction a;
    a.seq = 1;
    a.method = "m::C#init";
    a.args = {SerializedValue::str("in")};
    a.result = SerializedValue::ref("o1", "m::C");
    Interaction b;
    b.seq = 2;
    b.method = "m::C#get";
    b.recv = "o1";
    b.result = SerializedValue::integer(5);
    s.interactions = {a, b};
    s.status = SnapStatus::Passed;
    return s;
}

}  // namespace

TEST_CASE("identical snapshots have no finding") {
    auto s = base_snapshot();
    CHECK(!compare_snapshots(s, s).has_value());
}

TEST_CASE("method change is a protocol finding") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    b.interactions[1].method = "m::C#fetch";
    auto f = compare_snapshots(a, b);
    REQUIRE(f.has_value());
    CHECK(f->category == Category::ProtocolChange);
    CHECK(f->position == 2);
    CHECK(*f->method == "m::C#get");
}

TEST_CASE("argument change is an input finding") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    b.interactions[0].args[0] = SerializedValue::str("other");
    auto f = compare_snapshots(a, b);
    REQUIRE(f.has_value());
    CHECK(f->category == Category::InputChange);
    CHECK(f->position == 1);
    CHECK(*f->old_text == "{\"t\":\"str\",\"v\":\"in\"}");
    CHECK(*f->new_text == "{\"t\":\"str\",\"v\":\"other\"}");
}

TEST_CASE("result change is a value finding") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    b.interactions[1].result = SerializedValue::integer(6);
    auto f = compare_snapshots(a, b);
    REQUIRE(f.has_value());
    CHECK(f->category == Category::ValueChange);
    CHECK(f->position == 2);
    CHECK(*f->method == "m::C#get");
}

TEST_CASE("exception vs value and exception detail findings") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    b.interactions[1].result = SerializedValue::exc("KeyError", "k");
    auto f = compare_snapshots(a, b);
    REQUIRE(f.has_value());
    CHECK(f->category == Category::ExceptionChange);

    auto c = base_snapshot();
    c.interactions[1].result = SerializedValue::exc("KeyError", "k1");
    auto d = base_snapshot();
    d.interactions[1].result = SerializedValue::exc("KeyError", "k2");
    f = compare_snapshots(c, d);
    REQUIRE(f.has_value());
    CHECK(f->category == Category::ExceptionChange);

    CompareOptions type_only;
    type_only.exc_type_only = true;
    CHECK(!compare_snapshots(c, d, type_only).has_value());

    d.interactions[1].result = SerializedValue::exc("TypeError", "k1");
    CHECK(compare_snapshots(c, d, type_only).has_value());
}

TEST_CASE("category priority within one position") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    // Method, args, and result all differ; the protocol break wins.
    b.interactions[1].method = "m::C#other";
    b.interactions[1].args = {SerializedValue::integer(1)};
    b.interactions[1].result = SerializedValue::integer(9);
    auto f = compare_snapshots(a, b);
    REQUIRE(f.has_value());
    CHECK(f->category == Category::ProtocolChange);
}

TEST_CASE("tail length change points past the common prefix") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    Interaction extra;
    extra.seq = 3;
    extra.method = "m::C#extra";
    extra.result = SerializedValue::null();
    b.interactions.push_back(extra);
    auto f = compare_snapshots(a, b);
    REQUIRE(f.has_value());
    CHECK(f->category == Category::LengthChange);
    CHECK(f->position == 3);
    CHECK(*f->method == "m::C#extra");
    CHECK(*f->old_text == "2 interactions");
    CHECK(*f->new_text == "3 interactions");
}

TEST_CASE("outcome change is reported when interactions agree") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    b.status = SnapStatus::Failed;
    b.detail = "assert failed at line 9";
    auto f = compare_snapshots(a, b);
    REQUIRE(f.has_value());
    CHECK(f->category == Category::OutcomeChange);
    CHECK(f->position == 0);
    CHECK(*f->old_text == "passed");
    CHECK(*f->new_text == "failed");
}

TEST_CASE("consistent object-id renaming is invisible") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    b.interactions[0].result = SerializedValue::ref("o7", "m::C");
    b.interactions[1].recv = "o7";
    CHECK(!compare_snapshots(a, b).has_value());
}

TEST_CASE("inconsistent object identity is a divergence") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    b.interactions[1].recv = "o2";  // different object than the one constructed
    auto f = compare_snapshots(a, b);
    REQUIRE(f.has_value());
    CHECK(f->position == 2);
}

TEST_CASE("mismatched test ids cannot be compared") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    b.test_id = "t__other";
    CHECK_THROWS_AS(compare_snapshots(a, b), TestIdMismatch);
    CHECK_THROWS_AS(compare_snapshots_all(a, b), TestIdMismatch);
}

TEST_CASE("all-positions mode reports every difference") {
    auto a = base_snapshot();
    auto b = base_snapshot();
    b.interactions[0].args[0] = SerializedValue::str("other");
    b.interactions[1].result = SerializedValue::integer(6);
    b.status = SnapStatus::Errored;
    b.detail = "TypeError: x";
    auto all = compare_snapshots_all(a, b);
    REQUIRE(all.size() == 3);
    CHECK(all[0].category == Category::InputChange);
    CHECK(all[1].category == Category::ValueChange);
    CHECK(all[2].category == Category::OutcomeChange);

    CHECK(compare_snapshots_all(a, a).empty());
}

TEST_CASE("set comparison pairs, excludes flaky, and flags unpaired tests") {
    TempDir dir;
    auto a1 = base_snapshot();
    auto a2 = base_snapshot();
    a2.test_id = "t__old_only";
    auto a3 = base_snapshot();
    a3.test_id = "t__flaky";
    snap::write_snapshot(a1, dir.sub("old"));
    snap::write_snapshot(a2, dir.sub("old"));
    snap::write_snapshot(a3, dir.sub("old"));

    auto b1 = base_snapshot();
    b1.interactions[1].result = SerializedValue::integer(6);
    auto b4 = base_snapshot();
    b4.test_id = "t__new_only";
    snap::write_snapshot(b1, dir.sub("new"));
    snap::write_snapshot(b4, dir.sub("new"));

    auto report = compare_sets(dir.sub("old"), dir.sub("new"), {"t__flaky"});
    CHECK(report.compared == 1);
    CHECK(report.identical == 0);
    CHECK(report.differing == 1);
    CHECK(report.flaky_excluded == 1);
    REQUIRE(report.findings.size() == 3);
    CHECK(report.findings[0].category == Category::ValueChange);
    CHECK(report.findings[1].category == Category::MissingTest);
    CHECK(report.findings[1].test_id == "t__old_only");
    CHECK(report.findings[2].category == Category::ExtraTest);
    CHECK(report.findings[2].test_id == "t__new_only");
    CHECK(report.baseline_fingerprint == "lf-old");
}

TEST_CASE("a truncated candidate reports the truncation point") {
    TempDir dir;
    auto a = base_snapshot();
    snap::write_snapshot(a, dir.sub("old"));

    // Candidate recording stops after the first interaction, no footer.
    std::string truncated_text =
        "{\"version\":1,\"test\":\"t__case\",\"project\":\"pf\",\"library\":\"lf-new\"}\n"
        "{\"seq\":1,\"method\":\"m::C#init\",\"recv\":null,"
        "\"args\":[{\"t\":\"str\",\"v\":\"in\"}],"
        "\"result\":{\"t\":\"ref\",\"id\":\"o1\",\"class\":\"m::C\"}}\n";
    testutil::write_file(
        std::filesystem::path(dir.sub("new")) / "t__case.snap.jsonl", truncated_text);

    auto report = compare_sets(dir.sub("old"), dir.sub("new"));
    REQUIRE(report.findings.size() == 1);
    const auto& f = report.findings[0];
    CHECK(f.category == Category::ProtocolChange);
    CHECK(f.position == 2);
    CHECK(*f.method == "m::C#get");
    CHECK(*f.old_text == "recording continues");
    CHECK(*f.new_text == "recording truncated");
}

TEST_CASE("a divergence in the truncated prefix wins over the truncation") {
    TempDir dir;
    auto a = base_snapshot();
    snap::write_snapshot(a, dir.sub("old"));
    std::string truncated_text =
        "{\"version\":1,\"test\":\"t__case\",\"project\":\"pf\",\"library\":\"lf-new\"}\n"
        "{\"seq\":1,\"method\":\"m::C#init\",\"recv\":null,"
        "\"args\":[{\"t\":\"str\",\"v\":\"CHANGED\"}],"
        "\"result\":{\"t\":\"ref\",\"id\":\"o1\",\"class\":\"m::C\"}}\n";
    testutil::write_file(
        std::filesystem::path(dir.sub("new")) / "t__case.snap.jsonl", truncated_text);
    auto report = compare_sets(dir.sub("old"), dir.sub("new"));
    REQUIRE(report.findings.size() == 1);
    CHECK(report.findings[0].category == Category::InputChange);
    CHECK(report.findings[0].position == 1);
}

TEST_CASE("malformed snapshot files carry their path in the error") {
    TempDir dir;
    auto a = base_snapshot();
    snap::write_snapshot(a, dir.sub("old"));
    testutil::write_file(
        std::filesystem::path(dir.sub("new")) / "t__case.snap.jsonl", "garbage\n");
    try {
        compare_sets(dir.sub("old"), dir.sub("new"));
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("t__case.snap.jsonl") != std::string::npos);
    }
}

TEST_CASE("report rendering round-trips through json") {
    Report r;
    r.baseline_fingerprint = "aa";
    r.candidate_fingerprint = "bb";
    r.compared = 2;
    r.identical = 1;
    r.differing = 1;
    Finding f;
    f.test_id = "t__x";
    f.position = 3;
    f.category = Category::ValueChange;
    f.method = "m::C#get";
    f.old_text = "{\"t\":\"int\",\"v\":5}";
    f.new_text = "{\"t\":\"int\",\"v\":6}";
    r.findings.push_back(f);

    std::string text = render_report(r, "text");
    CHECK(text ==
          "t__x :: 3 :: VALUE_CHANGE :: m::C#get :: "
          "{\"t\":\"int\",\"v\":5} -> {\"t\":\"int\",\"v\":6}\n"
          "1 finding across 2 tests\n");

    Report parsed = parse_report_json(render_report(r, "json"));
    CHECK(parsed.baseline_fingerprint == r.baseline_fingerprint);
    CHECK(parsed.compared == r.compared);
    CHECK(parsed.flaky_excluded == r.flaky_excluded);
    REQUIRE(parsed.findings.size() == 1);
    CHECK(parsed.findings[0] == f);

    CHECK_THROWS_AS(render_report(r, "yaml"), Error);
    CHECK_THROWS_AS(parse_report_json("{\"version\":9}"), FormatError);
}

TEST_CASE("category names round-trip") {
    for (auto c : {Category::ProtocolChange, Category::InputChange,
                   Category::ValueChange, Category::ExceptionChange,
                   Category::LengthChange, Category::OutcomeChange,
                   Category::MissingTest, Category::ExtraTest})
        CHECK(category_from_name(category_name(c)) == c);
    CHECK_THROWS_AS(category_from_name("NOPE"), FormatError);
}

// ---- randomized properties against the positional oracle ----

namespace {

Snapshot rename_ids(Snapshot s, const std::string& prefix) {
    testutil::NormState st;
    // Deterministic consistent renaming with a distinct namespace.
    for (auto& i : s.interactions) {
        if (i.recv) i.recv = prefix + st.norm(*i.recv);
        auto walk = [&](auto&& self, SerializedValue& v) -> void {
            if (v.tag == SerializedValue::Tag::Ref) {
                v.str_v2 = prefix + st.norm(v.str_v2);
                return;
            }
            for (auto& item : v.items) self(self, item);
            for (auto& [k, e] : v.entries) self(self, e);
        };
        for (auto& a : i.args) walk(walk, a);
        walk(walk, i.result);
    }
    return s;
}

}  // namespace

TEST_CASE("randomized: differ agrees with the positional oracle") {
    testutil::ValueGen gen(0xD1FF);
    int diverging = 0;
    for (int i = 0; i < 3'000; ++i) {
        auto a = gen.snapshot("gen__t");
        // Half the pairs start from a perturbed copy of `a`, half are
        // independent, covering near-miss and far-apart cases.
        Snapshot b;
        if (gen.pick(2) == 0) {
            b = a;
            if (gen.pick(2) == 0 && !b.interactions.empty()) {
                auto& target = b.interactions[gen.pick(
                    static_cast<int>(b.interactions.size()))];
                switch (gen.pick(3)) {
                    case 0: target.method += "_x"; break;
                    case 1: target.args.push_back(gen.value(2)); break;
                    default: target.result = gen.value(1); break;
                }
            } else if (gen.pick(2) == 0) {
                b.status = b.status == SnapStatus::Passed ? SnapStatus::Failed
                                                          : SnapStatus::Passed;
            }
        } else {
            b = gen.snapshot("gen__t");
        }

        auto oracle = testutil::oracle_first_divergence(a, b);
        auto f = compare_snapshots(a, b);
        CAPTURE(snap::snapshot_to_text(a));
        CAPTURE(snap::snapshot_to_text(b));
        REQUIRE(f.has_value() == oracle.diverges);
        if (f) {
            ++diverging;
            CHECK(f->position == oracle.position);
            // Divergence position is symmetric.
            auto rf = compare_snapshots(b, a);
            REQUIRE(rf.has_value());
            CHECK(rf->position == f->position);
        }
        // Reflexivity and renaming invariance.
        CHECK(!compare_snapshots(a, a).has_value());
        auto renamed = rename_ids(b, "r");
        auto f2 = compare_snapshots(a, renamed);
        CHECK(f2.has_value() == f.has_value());
        if (f && f2) CHECK(f2->position == f->position);
    }
    CHECK(diverging > 500);  // the generator must exercise both outcomes
}
