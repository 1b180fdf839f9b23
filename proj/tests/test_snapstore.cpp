#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unordered_map>

#include "core/errors.hpp"
#include "snapstore/snapstore.hpp"
#include "test_util.hpp"

using namespace bsnap;
using rec::Interaction;
using rec::SerializedValue;
using rec::Snapshot;
using rec::SnapStatus;
using snap::canonical_decode;
using snap::canonical_encode;
using testutil::TempDir;

TEST_CASE("canonical encodings are byte-exact") {
    CHECK(canonical_encode(SerializedValue::null()) == "{\"t\":\"null\"}");
    CHECK(canonical_encode(SerializedValue::boolean(true)) ==
          "{\"t\":\"bool\",\"v\":true}");
    CHECK(canonical_encode(SerializedValue::integer(-42)) ==
          "{\"t\":\"int\",\"v\":-42}");
    CHECK(canonical_encode(SerializedValue::floating(1.0)) ==
          "{\"t\":\"float\",\"v\":1.0}");
    CHECK(canonical_encode(SerializedValue::floating(-0.0)) ==
          "{\"t\":\"float\",\"v\":-0.0}");
    CHECK(canonical_encode(SerializedValue::floating(0.1)) ==
          "{\"t\":\"float\",\"v\":0.1}");
    CHECK(canonical_encode(SerializedValue::str("a\"\n")) ==
          "{\"t\":\"str\",\"v\":\"a\\\"\\n\"}");
    CHECK(canonical_encode(SerializedValue::list({SerializedValue::integer(1)}, true)) ==
          "{\"t\":\"list\",\"fixed\":true,\"items\":[{\"t\":\"int\",\"v\":1}]}");
    CHECK(canonical_encode(SerializedValue::map(
              {{"a", SerializedValue::null()}, {"b", SerializedValue::boolean(false)}})) ==
          "{\"t\":\"map\",\"entries\":[[\"a\",{\"t\":\"null\"}],"
          "[\"b\",{\"t\":\"bool\",\"v\":false}]]}");
    CHECK(canonical_encode(SerializedValue::record(
              "m::P", {{"x", SerializedValue::integer(3)}})) ==
          "{\"t\":\"rec\",\"class\":\"m::P\",\"fields\":[[\"x\",{\"t\":\"int\",\"v\":3}]]}");
    CHECK(canonical_encode(SerializedValue::ref("o1", "m::C")) ==
          "{\"t\":\"ref\",\"id\":\"o1\",\"class\":\"m::C\"}");
    CHECK(canonical_encode(SerializedValue::exc("KeyError", "missing")) ==
          "{\"t\":\"exc\",\"type\":\"KeyError\",\"msg\":\"missing\"}");
}

TEST_CASE("decode inverts encode on hand-picked values") {
    auto values = {
        SerializedValue::null(),
        SerializedValue::integer(INT64_MIN),
        SerializedValue::floating(-0.0),
        SerializedValue::floating(1.7976931348623157e308),
        SerializedValue::str("tab\tchar"),
        SerializedValue::list({SerializedValue::floating(0.5)}, false),
        SerializedValue::record("m::R", {}),
    };
    for (const auto& v : values) {
        CAPTURE(canonical_encode(v));
        CHECK(canonical_decode(canonical_encode(v)) == v);
    }
}

TEST_CASE("decode accepts non-canonical JSON spellings") {
    CHECK(canonical_decode("{ \"v\": 5, \"t\": \"int\" }") ==
          SerializedValue::integer(5));
    CHECK(canonical_decode("{\"t\":\"float\",\"v\":2}") ==
          SerializedValue::floating(2.0));
}

TEST_CASE("decode rejects malformed values") {
    CHECK_THROWS_AS(canonical_decode("{\"t\":\"wat\"}"), FormatError);
    CHECK_THROWS_AS(canonical_decode("{\"t\":\"int\",\"v\":\"5\"}"), FormatError);
    CHECK_THROWS_AS(canonical_decode("{\"t\":\"list\",\"items\":[]}"), FormatError);
    CHECK_THROWS_AS(canonical_decode("[1]"), FormatError);
    CHECK_THROWS_AS(canonical_decode("nonsense"), FormatError);
}

namespace {

Snapshot sample_snapshot() {
    Snapshot s;
    s.test_id = "t__one";
    s.project_fingerprint = "pf";
    s.library_fingerprint = "lf";
    Interaction i;
    i.seq = 1;
    i.method = "m::C#init";
    i.args = {SerializedValue::str("x")};
    i.result = SerializedValue::ref("o1", "m::C");
    s.interactions.push_back(i);
    Interaction j;
    j.seq = 2;
    j.method = "m::C#poke";
    j.recv = "o1";
    j.result = SerializedValue::null();
    s.interactions.push_back(j);
    s.status = SnapStatus::Passed;
    return s;
}

}  // namespace

TEST_CASE("snapshot text layout") {
    CHECK(snap::snapshot_to_text(sample_snapshot()) ==
          "{\"version\":1,\"test\":\"t__one\",\"project\":\"pf\",\"library\":\"lf\"}\n"
          "{\"seq\":1,\"method\":\"m::C#init\",\"recv\":null,"
          "\"args\":[{\"t\":\"str\",\"v\":\"x\"}],"
          "\"result\":{\"t\":\"ref\",\"id\":\"o1\",\"class\":\"m::C\"}}\n"
          "{\"seq\":2,\"method\":\"m::C#poke\",\"recv\":\"o1\",\"args\":[],"
          "\"result\":{\"t\":\"null\"}}\n"
          "{\"end\":true,\"status\":\"passed\",\"detail\":null}\n");
}

TEST_CASE("snapshot parse inverts rendering") {
    auto s = sample_snapshot();
    auto parsed = snap::parse_snapshot(snap::snapshot_to_text(s));
    CHECK(!parsed.truncated);
    CHECK(parsed.snapshot == s);
}

TEST_CASE("failed footers carry their detail") {
    auto s = sample_snapshot();
    s.status = SnapStatus::Failed;
    s.detail = "assert_eq: 1 != 2";
    auto parsed = snap::parse_snapshot(snap::snapshot_to_text(s));
    CHECK(parsed.snapshot.status == SnapStatus::Failed);
    CHECK(*parsed.snapshot.detail == "assert_eq: 1 != 2");
}

TEST_CASE("version gate") {
    CHECK_THROWS_AS(
        snap::parse_snapshot(
            "{\"version\":2,\"test\":\"t\",\"project\":\"p\",\"library\":\"l\"}\n"
            "{\"end\":true,\"status\":\"passed\",\"detail\":null}\n"),
        FormatError);
}

TEST_CASE("non-contiguous seq is rejected with positions") {
    std::string text =
        "{\"version\":1,\"test\":\"t\",\"project\":\"p\",\"library\":\"l\"}\n"
        "{\"seq\":2,\"method\":\"m\",\"recv\":null,\"args\":[],\"result\":{\"t\":\"null\"}}\n"
        "{\"end\":true,\"status\":\"passed\",\"detail\":null}\n";
    try {
        snap::parse_snapshot(text);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("expected 1, got 2") != std::string::npos);
    }
}

TEST_CASE("content after the footer is rejected") {
    std::string text =
        "{\"version\":1,\"test\":\"t\",\"project\":\"p\",\"library\":\"l\"}\n"
        "{\"end\":true,\"status\":\"passed\",\"detail\":null}\n"
        "{\"end\":true,\"status\":\"passed\",\"detail\":null}\n";
    CHECK_THROWS_AS(snap::parse_snapshot(text), FormatError);
}

TEST_CASE("missing footer is a truncation") {
    std::string text =
        "{\"version\":1,\"test\":\"t\",\"project\":\"p\",\"library\":\"l\"}\n"
        "{\"seq\":1,\"method\":\"m\",\"recv\":null,\"args\":[],\"result\":{\"t\":\"null\"}}\n";
    CHECK_THROWS_AS(snap::parse_snapshot(text), TruncatedSnapshot);
    auto parsed = snap::parse_snapshot(text, /*allow_truncated=*/true);
    CHECK(parsed.truncated);
    CHECK(parsed.snapshot.interactions.size() == 1);
}

TEST_CASE("file round trip and directory listing") {
    TempDir dir;
    auto s = sample_snapshot();
    snap::write_snapshot(s, dir.sub("snaps"));
    CHECK(snap::snapshot_path(dir.sub("snaps"), "t__one") ==
          dir.sub("snaps") + "/t__one.snap.jsonl");
    CHECK(snap::read_snapshot(snap::snapshot_path(dir.sub("snaps"), "t__one")) == s);

    auto s2 = s;
    s2.test_id = "a__two";
    snap::write_snapshot(s2, dir.sub("snaps"));
    testutil::write_file(std::filesystem::path(dir.sub("snaps")) / "notes.txt", "x");
    CHECK(snap::list_snapshot_tests(dir.sub("snaps")) ==
          std::vector<std::string>{"a__two", "t__one"});
}

TEST_CASE("random values round-trip bit-exactly and encode injectively") {
    testutil::ValueGen gen(0xC0FFEE);
    std::unordered_map<std::string, SerializedValue> seen;
    for (int i = 0; i < 50'000; ++i) {
        auto v = gen.value();
        std::string enc = canonical_encode(v);
        CHECK(canonical_decode(enc) == v);
        auto [it, inserted] = seen.emplace(enc, v);
        if (!inserted) CHECK(it->second == v);
    }
}

TEST_CASE("random snapshots round-trip through text") {
    testutil::ValueGen gen(0xBEEF);
    for (int i = 0; i < 2'000; ++i) {
        auto s = gen.snapshot("gen__t" + std::to_string(i));
        auto parsed = snap::parse_snapshot(snap::snapshot_to_text(s));
        CHECK(parsed.snapshot == s);
    }
}
