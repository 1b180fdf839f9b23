#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "minilang/ast.hpp"

namespace bsnap::minilang {

struct Value;

struct ListObj {
    std::vector<Value> items;
    bool fixed = false;
};

struct MapObj {
    std::map<std::string, Value> entries;
};

enum class Origin { Library, Client };

struct Instance {
    const ClassDecl* cls = nullptr;
    std::string class_id;  // "mod::Class"
    Origin origin = Origin::Client;
    std::map<std::string, Value> fields;
    bool is_record() const { return cls && cls->is_record; }
};

struct ExcObj {
    std::string type;
    std::string message;
};

using ListPtr = std::shared_ptr<ListObj>;
using MapPtr = std::shared_ptr<MapObj>;
using InstancePtr = std::shared_ptr<Instance>;
using ExcPtr = std::shared_ptr<const ExcObj>;

struct Value {
    std::variant<std::monostate, bool, int64_t, double, std::string, ListPtr, MapPtr,
                 InstancePtr, ExcPtr>
        v;

    static Value null() { return Value{}; }
    static Value boolean(bool b) { return Value{{b}}; }
    static Value integer(int64_t i) { return Value{{i}}; }
    static Value floating(double d) { return Value{{d}}; }
    static Value string(std::string s) { return Value{{std::move(s)}}; }
    static Value list(ListPtr p) { return Value{{std::move(p)}}; }
    static Value map(MapPtr p) { return Value{{std::move(p)}}; }
    static Value instance(InstancePtr p) { return Value{{std::move(p)}}; }
    static Value exception(std::string type, std::string msg) {
        return Value{{std::make_shared<const ExcObj>(ExcObj{std::move(type), std::move(msg)})}};
    }

    bool is_null() const { return std::holds_alternative<std::monostate>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_int() const { return std::holds_alternative<int64_t>(v); }
    bool is_float() const { return std::holds_alternative<double>(v); }
    bool is_str() const { return std::holds_alternative<std::string>(v); }
    bool is_list() const { return std::holds_alternative<ListPtr>(v); }
    bool is_map() const { return std::holds_alternative<MapPtr>(v); }
    bool is_instance() const { return std::holds_alternative<InstancePtr>(v); }
    bool is_exc() const { return std::holds_alternative<ExcPtr>(v); }

    bool as_bool() const { return std::get<bool>(v); }
    int64_t as_int() const { return std::get<int64_t>(v); }
    double as_float() const { return std::get<double>(v); }
    const std::string& as_str() const { return std::get<std::string>(v); }
    const ListPtr& as_list() const { return std::get<ListPtr>(v); }
    const MapPtr& as_map() const { return std::get<MapPtr>(v); }
    const InstancePtr& as_instance() const { return std::get<InstancePtr>(v); }
    const ExcPtr& as_exc() const { return std::get<ExcPtr>(v); }
};

// `==` semantics: deep structural equality for scalars, lists, maps, and
// record instances; identity for non-record instances; type-mismatched
// operands compare unequal. Throws MiniLangThrow(TypeError) past the depth cap.
bool values_equal(const Value& a, const Value& b);

// Display form used by str(v), print(v), and assertion messages.
std::string value_to_display(const Value& v);

// typeof(v) result.
std::string value_type_name(const Value& v);

// Shortest round-trip decimal rendering of a double (no NaN/Inf in the value
// space by construction).
std::string float_repr(double d);

// Exception carrier for MiniLang-level exceptions (catchable via try/catch).
struct MiniLangThrow {
    Value exc;  // always an ExcPtr value
};

[[noreturn]] void raise(std::string type, std::string message);

}  // namespace bsnap::minilang
