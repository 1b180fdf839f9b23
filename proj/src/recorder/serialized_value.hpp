#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bsnap::rec {

// Canonical, version-stable encoding of a runtime value. Contains no runtime
// handles; opaque instances appear only as refs carrying an ObjectId.
struct SerializedValue {
    enum class Tag { Null, Bool, Int, Float, Str, List, Map, Record, Ref, Exc };

    Tag tag = Tag::Null;
    bool bool_v = false;
    int64_t int_v = 0;
    double float_v = 0.0;
    std::string str_v;   // Str value | Record/Ref class id | Exc type
    std::string str_v2;  // Ref object id | Exc message
    bool fixed = false;  // List only
    std::vector<SerializedValue> items;  // List
    std::vector<std::pair<std::string, SerializedValue>> entries;  // Map/Record, sorted

    static SerializedValue null() { return {}; }
    static SerializedValue boolean(bool b) {
        SerializedValue v;
        v.tag = Tag::Bool;
        v.bool_v = b;
        return v;
    }
    static SerializedValue integer(int64_t i) {
        SerializedValue v;
        v.tag = Tag::Int;
        v.int_v = i;
        return v;
    }
    static SerializedValue floating(double d) {
        SerializedValue v;
        v.tag = Tag::Float;
        v.float_v = d;
        return v;
    }
    static SerializedValue str(std::string s) {
        SerializedValue v;
        v.tag = Tag::Str;
        v.str_v = std::move(s);
        return v;
    }
    static SerializedValue list(std::vector<SerializedValue> items, bool fixed) {
        SerializedValue v;
        v.tag = Tag::List;
        v.items = std::move(items);
        v.fixed = fixed;
        return v;
    }
    static SerializedValue map(std::vector<std::pair<std::string, SerializedValue>> entries) {
        SerializedValue v;
        v.tag = Tag::Map;
        v.entries = std::move(entries);
        return v;
    }
    static SerializedValue record(std::string class_id,
                                  std::vector<std::pair<std::string, SerializedValue>> fields) {
        SerializedValue v;
        v.tag = Tag::Record;
        v.str_v = std::move(class_id);
        v.entries = std::move(fields);
        return v;
    }
    static SerializedValue ref(std::string object_id, std::string class_id) {
        SerializedValue v;
        v.tag = Tag::Ref;
        v.str_v = std::move(class_id);
        v.str_v2 = std::move(object_id);
        return v;
    }
    static SerializedValue exc(std::string type, std::string message) {
        SerializedValue v;
        v.tag = Tag::Exc;
        v.str_v = std::move(type);
        v.str_v2 = std::move(message);
        return v;
    }

    bool is_exc() const { return tag == Tag::Exc; }
    bool is_ref() const { return tag == Tag::Ref; }

    bool operator==(const SerializedValue& o) const {
        if (tag != o.tag) return false;
        switch (tag) {
            case Tag::Null: return true;
            case Tag::Bool: return bool_v == o.bool_v;
            case Tag::Int: return int_v == o.int_v;
            case Tag::Float:
                // Bit-pattern comparison keeps -0.0 distinct from 0.0.
                {
                    uint64_t a, b;
                    static_assert(sizeof(a) == sizeof(float_v));
                    __builtin_memcpy(&a, &float_v, sizeof(a));
                    __builtin_memcpy(&b, &o.float_v, sizeof(b));
                    return a == b;
                }
            case Tag::Str: return str_v == o.str_v;
            case Tag::List: return fixed == o.fixed && items == o.items;
            case Tag::Map: return entries == o.entries;
            case Tag::Record: return str_v == o.str_v && entries == o.entries;
            case Tag::Ref: return str_v == o.str_v && str_v2 == o.str_v2;
            case Tag::Exc: return str_v == o.str_v && str_v2 == o.str_v2;
        }
        return false;
    }
};

// One boundary event: the <method, receiver, args, result> tuple.
struct Interaction {
    int seq = 0;  // 1-based, contiguous within a snapshot
    std::string method;
    std::optional<std::string> recv;  // object id; absent for functions/constructors
    std::vector<SerializedValue> args;
    SerializedValue result;  // value, ref, or exc

    bool operator==(const Interaction&) const = default;
};

enum class SnapStatus { Passed, Failed, Errored };

const char* snap_status_name(SnapStatus s);
SnapStatus snap_status_from_name(const std::string& name);

struct Snapshot {
    // header
    int version = 1;
    std::string test_id;
    std::string project_fingerprint;
    std::string library_fingerprint;
    // body
    std::vector<Interaction> interactions;
    // footer
    SnapStatus status = SnapStatus::Passed;
    std::optional<std::string> detail;

    bool operator==(const Snapshot&) const = default;
};

}  // namespace bsnap::rec
