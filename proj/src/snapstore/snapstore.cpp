#include "snapstore/snapstore.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using bsnap::rec::Interaction;
using bsnap::rec::SerializedValue;
using bsnap::rec::Snapshot;
using bsnap::rec::SnapStatus;

namespace bsnap::rec {

const char* snap_status_name(SnapStatus s) {
    switch (s) {
        case SnapStatus::Passed: return "passed";
        case SnapStatus::Failed: return "failed";
        case SnapStatus::Errored: return "errored";
    }
    return "?";
}

SnapStatus snap_status_from_name(const std::string& name) {
    if (name == "passed") return SnapStatus::Passed;
    if (name == "failed") return SnapStatus::Failed;
    if (name == "errored") return SnapStatus::Errored;
    throw FormatError("unknown status '" + name + "'");
}

}  // namespace bsnap::rec

namespace bsnap::snap {

namespace {

void append_json_string(std::string& out, const std::string& s) {
    out.push_back('"');
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
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
    out.push_back('"');
}

// Shortest round-trip decimal, forced into float spelling so decoding sees a
// double (keeps -0.0 intact).
void append_float(std::string& out, double d) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
    std::string s(buf, end);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find('E') == std::string::npos)
        s += ".0";
    out += s;
}

void encode_rec(std::string& out, const SerializedValue& v) {
    using Tag = SerializedValue::Tag;
    switch (v.tag) {
        case Tag::Null:
            out += "{\"t\":\"null\"}";
            return;
        case Tag::Bool:
            out += v.bool_v ? "{\"t\":\"bool\",\"v\":true}"
                            : "{\"t\":\"bool\",\"v\":false}";
            return;
        case Tag::Int:
            out += "{\"t\":\"int\",\"v\":" + std::to_string(v.int_v) + "}";
            return;
        case Tag::Float:
            out += "{\"t\":\"float\",\"v\":";
            append_float(out, v.float_v);
            out.push_back('}');
            return;
        case Tag::Str:
            out += "{\"t\":\"str\",\"v\":";
            append_json_string(out, v.str_v);
            out.push_back('}');
            return;
        case Tag::List: {
            out += "{\"t\":\"list\",\"fixed\":";
            out += v.fixed ? "true" : "false";
            out += ",\"items\":[";
            bool first = true;
            for (const auto& item : v.items) {
                if (!first) out.push_back(',');
                first = false;
                encode_rec(out, item);
            }
            out += "]}";
            return;
        }
        case Tag::Map: {
            out += "{\"t\":\"map\",\"entries\":[";
            bool first = true;
            for (const auto& [k, val] : v.entries) {
                if (!first) out.push_back(',');
                first = false;
                out.push_back('[');
                append_json_string(out, k);
                out.push_back(',');
                encode_rec(out, val);
                out.push_back(']');
            }
            out += "]}";
            return;
        }
        case Tag::Record: {
            out += "{\"t\":\"rec\",\"class\":";
            append_json_string(out, v.str_v);
            out += ",\"fields\":[";
            bool first = true;
            for (const auto& [k, val] : v.entries) {
                if (!first) out.push_back(',');
                first = false;
                out.push_back('[');
                append_json_string(out, k);
                out.push_back(',');
                encode_rec(out, val);
                out.push_back(']');
            }
            out += "]}";
            return;
        }
        case Tag::Ref:
            out += "{\"t\":\"ref\",\"id\":";
            append_json_string(out, v.str_v2);
            out += ",\"class\":";
            append_json_string(out, v.str_v);
            out.push_back('}');
            return;
        case Tag::Exc:
            out += "{\"t\":\"exc\",\"type\":";
            append_json_string(out, v.str_v);
            out += ",\"msg\":";
            append_json_string(out, v.str_v2);
            out.push_back('}');
            return;
    }
}

SerializedValue decode_json(const json& j) {
    if (!j.is_object() || !j.contains("t") || !j["t"].is_string())
        throw FormatError("value missing tag");
    const std::string t = j["t"].get<std::string>();
    if (t == "null") return SerializedValue::null();
    if (t == "bool") {
        if (!j.contains("v") || !j["v"].is_boolean())
            throw FormatError("bool value malformed");
        return SerializedValue::boolean(j["v"].get<bool>());
    }
    if (t == "int") {
        if (!j.contains("v") || !j["v"].is_number_integer())
            throw FormatError("int value malformed");
        return SerializedValue::integer(j["v"].get<int64_t>());
    }
    if (t == "float") {
        if (!j.contains("v") || !j["v"].is_number())
            throw FormatError("float value malformed");
        return SerializedValue::floating(j["v"].get<double>());
    }
    if (t == "str") {
        if (!j.contains("v") || !j["v"].is_string())
            throw FormatError("str value malformed");
        return SerializedValue::str(j["v"].get<std::string>());
    }
    if (t == "list") {
        if (!j.contains("fixed") || !j["fixed"].is_boolean() || !j.contains("items") ||
            !j["items"].is_array())
            throw FormatError("list value malformed");
        std::vector<SerializedValue> items;
        for (const auto& item : j["items"]) items.push_back(decode_json(item));
        return SerializedValue::list(std::move(items), j["fixed"].get<bool>());
    }
    auto decode_pairs = [](const json& arr) {
        std::vector<std::pair<std::string, SerializedValue>> entries;
        for (const auto& entry : arr) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string())
                throw FormatError("entry pair malformed");
            entries.emplace_back(entry[0].get<std::string>(), decode_json(entry[1]));
        }
        return entries;
    };
    if (t == "map") {
        if (!j.contains("entries") || !j["entries"].is_array())
            throw FormatError("map value malformed");
        return SerializedValue::map(decode_pairs(j["entries"]));
    }
    if (t == "rec") {
        if (!j.contains("class") || !j["class"].is_string() || !j.contains("fields") ||
            !j["fields"].is_array())
            throw FormatError("record value malformed");
        return SerializedValue::record(j["class"].get<std::string>(),
                                       decode_pairs(j["fields"]));
    }
    if (t == "ref") {
        if (!j.contains("id") || !j["id"].is_string() || !j.contains("class") ||
            !j["class"].is_string())
            throw FormatError("ref value malformed");
        return SerializedValue::ref(j["id"].get<std::string>(),
                                    j["class"].get<std::string>());
    }
    if (t == "exc") {
        if (!j.contains("type") || !j["type"].is_string() || !j.contains("msg") ||
            !j["msg"].is_string())
            throw FormatError("exc value malformed");
        return SerializedValue::exc(j["type"].get<std::string>(),
                                    j["msg"].get<std::string>());
    }
    throw FormatError("unknown value tag '" + t + "'");
}

json parse_line(const std::string& line) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed snapshot line: ") + e.what());
    }
}

}  // namespace

std::string canonical_encode(const SerializedValue& v) {
    std::string out;
    encode_rec(out, v);
    return out;
}

SerializedValue canonical_decode(const std::string& text) {
    return decode_json(parse_line(text));
}

std::string snapshot_to_text(const Snapshot& s) {
    std::string out = "{\"version\":" + std::to_string(s.version) + ",\"test\":";
    append_json_string(out, s.test_id);
    out += ",\"project\":";
    append_json_string(out, s.project_fingerprint);
    out += ",\"library\":";
    append_json_string(out, s.library_fingerprint);
    out += "}\n";

    for (const auto& i : s.interactions) {
        out += "{\"seq\":" + std::to_string(i.seq) + ",\"method\":";
        append_json_string(out, i.method);
        out += ",\"recv\":";
        if (i.recv)
            append_json_string(out, *i.recv);
        else
            out += "null";
        out += ",\"args\":[";
        bool first = true;
        for (const auto& a : i.args) {
            if (!first) out.push_back(',');
            first = false;
            encode_rec(out, a);
        }
        out += "],\"result\":";
        encode_rec(out, i.result);
        out += "}\n";
    }

    out += "{\"end\":true,\"status\":\"";
    out += rec::snap_status_name(s.status);
    out += "\",\"detail\":";
    if (s.detail)
        append_json_string(out, *s.detail);
    else
        out += "null";
    out += "}\n";
    return out;
}

ParsedSnapshot parse_snapshot(const std::string& text, bool allow_truncated) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw FormatError("empty snapshot file");

    json header = parse_line(lines[0]);
    if (!header.contains("version") || !header["version"].is_number_integer())
        throw FormatError("snapshot header missing version");
    if (header["version"].get<int>() != 1)
        throw FormatError("unsupported snapshot version " + header["version"].dump());
    for (const char* key : {"test", "project", "library"}) {
        if (!header.contains(key) || !header[key].is_string())
            throw FormatError(std::string("snapshot header missing '") + key + "'");
    }

    ParsedSnapshot out;
    out.snapshot.version = 1;
    out.snapshot.test_id = header["test"].get<std::string>();
    out.snapshot.project_fingerprint = header["project"].get<std::string>();
    out.snapshot.library_fingerprint = header["library"].get<std::string>();

    bool saw_footer = false;
    for (size_t idx = 1; idx < lines.size(); ++idx) {
        json j = parse_line(lines[idx]);
        if (j.contains("end")) {
            if (idx + 1 != lines.size())
                throw FormatError("content after snapshot footer");
            if (!j.contains("status") || !j["status"].is_string())
                throw FormatError("snapshot footer missing status");
            out.snapshot.status =
                rec::snap_status_from_name(j["status"].get<std::string>());
            if (j.contains("detail") && j["detail"].is_string())
                out.snapshot.detail = j["detail"].get<std::string>();
            saw_footer = true;
            break;
        }
        Interaction i;
        if (!j.contains("seq") || !j["seq"].is_number_integer() ||
            !j.contains("method") || !j["method"].is_string() || !j.contains("recv") ||
            !j.contains("args") || !j["args"].is_array() || !j.contains("result"))
            throw FormatError("malformed interaction line");
        i.seq = j["seq"].get<int>();
        if (i.seq != static_cast<int>(idx))
            throw FormatError("non-contiguous interaction seq: expected " +
                              std::to_string(idx) + ", got " + std::to_string(i.seq));
        i.method = j["method"].get<std::string>();
        if (j["recv"].is_string())
            i.recv = j["recv"].get<std::string>();
        else if (!j["recv"].is_null())
            throw FormatError("interaction recv must be string or null");
        for (const auto& a : j["args"]) i.args.push_back(decode_json(a));
        i.result = decode_json(j["result"]);
        out.snapshot.interactions.push_back(std::move(i));
    }

    if (!saw_footer) {
        if (!allow_truncated)
            throw TruncatedSnapshot("snapshot missing footer (truncated recording)");
        out.truncated = true;
    }
    return out;
}

std::string snapshot_path(const std::string& dir, const std::string& test_id) {
    return (fs::path(dir) / (test_id + ".snap.jsonl")).string();
}

void write_snapshot(const Snapshot& s, const std::string& dir) {
    fs::create_directories(dir);
    std::string path = snapshot_path(dir, s.test_id);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write " + path);
        out << snapshot_to_text(s);
    }
    fs::rename(tmp, path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read snapshot: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_snapshot(ss.str()).snapshot;
}

ParsedSnapshot read_snapshot_allow_truncated(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read snapshot: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_snapshot(ss.str(), /*allow_truncated=*/true);
}

std::vector<std::string> list_snapshot_tests(const std::string& dir) {
    const std::string suffix = ".snap.jsonl";
    std::vector<std::string> out;
    if (!fs::exists(dir)) throw Error("snapshot directory not found: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (name.size() > suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            out.push_back(name.substr(0, name.size() - suffix.size()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace bsnap::snap
