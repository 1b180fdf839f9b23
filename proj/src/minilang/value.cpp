#include "minilang/value.hpp"

#include <charconv>

namespace bsnap::minilang {

[[noreturn]] void raise(std::string type, std::string message) {
    throw MiniLangThrow{Value::exception(std::move(type), std::move(message))};
}

std::string float_repr(double d) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, end);
}

namespace {

constexpr int kEqDepthLimit = 512;

bool equal_rec(const Value& a, const Value& b, int depth) {
    if (depth > kEqDepthLimit)
        raise("TypeError", "equality recursion limit exceeded");
    if (a.v.index() != b.v.index()) {
        // Int/Float cross-comparison is the one numeric exception.
        if ((a.is_int() && b.is_float()) || (a.is_float() && b.is_int())) {
            double x = a.is_int() ? static_cast<double>(a.as_int()) : a.as_float();
            double y = b.is_int() ? static_cast<double>(b.as_int()) : b.as_float();
            return x == y;
        }
        return false;
    }
    if (a.is_null()) return true;
    if (a.is_bool()) return a.as_bool() == b.as_bool();
    if (a.is_int()) return a.as_int() == b.as_int();
    if (a.is_float()) return a.as_float() == b.as_float();
    if (a.is_str()) return a.as_str() == b.as_str();
    if (a.is_list()) {
        const auto& la = *a.as_list();
        const auto& lb = *b.as_list();
        if (la.fixed != lb.fixed || la.items.size() != lb.items.size()) return false;
        for (size_t i = 0; i < la.items.size(); ++i)
            if (!equal_rec(la.items[i], lb.items[i], depth + 1)) return false;
        return true;
    }
    if (a.is_map()) {
        const auto& ma = a.as_map()->entries;
        const auto& mb = b.as_map()->entries;
        if (ma.size() != mb.size()) return false;
        auto ia = ma.begin();
        auto ib = mb.begin();
        for (; ia != ma.end(); ++ia, ++ib) {
            if (ia->first != ib->first || !equal_rec(ia->second, ib->second, depth + 1))
                return false;
        }
        return true;
    }
    if (a.is_instance()) {
        const auto& pa = a.as_instance();
        const auto& pb = b.as_instance();
        if (pa->is_record() && pb->is_record()) {
            if (pa->class_id != pb->class_id) return false;
            const auto& fa = pa->fields;
            const auto& fb = pb->fields;
            if (fa.size() != fb.size()) return false;
            auto ia = fa.begin();
            auto ib = fb.begin();
            for (; ia != fa.end(); ++ia, ++ib) {
                if (ia->first != ib->first ||
                    !equal_rec(ia->second, ib->second, depth + 1))
                    return false;
            }
            return true;
        }
        return pa.get() == pb.get();
    }
    if (a.is_exc()) {
        return a.as_exc()->type == b.as_exc()->type &&
               a.as_exc()->message == b.as_exc()->message;
    }
    return false;
}

std::string display_rec(const Value& v, int depth) {
    if (depth > kEqDepthLimit) return "...";
    if (v.is_null()) return "null";
    if (v.is_bool()) return v.as_bool() ? "true" : "false";
    if (v.is_int()) return std::to_string(v.as_int());
    if (v.is_float()) return float_repr(v.as_float());
    if (v.is_str()) return v.as_str();
    if (v.is_list()) {
        std::string out = "[";
        bool first = true;
        for (const auto& it : v.as_list()->items) {
            if (!first) out += ", ";
            first = false;
            out += display_rec(it, depth + 1);
        }
        return out + "]";
    }
    if (v.is_map()) {
        std::string out = "{";
        bool first = true;
        for (const auto& [k, val] : v.as_map()->entries) {
            if (!first) out += ", ";
            first = false;
            out += k + ": " + display_rec(val, depth + 1);
        }
        return out + "}";
    }
    if (v.is_instance()) {
        const auto& inst = v.as_instance();
        if (inst->is_record()) {
            std::string out = inst->cls->name + "{";
            bool first = true;
            for (const auto& [k, val] : inst->fields) {
                if (!first) out += ", ";
                first = false;
                out += k + ": " + display_rec(val, depth + 1);
            }
            return out + "}";
        }
        return "<" + inst->cls->name + ">";
    }
    if (v.is_exc()) return v.as_exc()->type + ": " + v.as_exc()->message;
    return "?";
}

}  // namespace

bool values_equal(const Value& a, const Value& b) { return equal_rec(a, b, 0); }

std::string value_to_display(const Value& v) { return display_rec(v, 0); }

std::string value_type_name(const Value& v) {
    if (v.is_null()) return "null";
    if (v.is_bool()) return "bool";
    if (v.is_int()) return "int";
    if (v.is_float()) return "float";
    if (v.is_str()) return "str";
    if (v.is_list()) return "list";
    if (v.is_map()) return "map";
    if (v.is_instance()) return v.as_instance()->cls->name;
    if (v.is_exc()) return "exception";
    return "?";
}

}  // namespace bsnap::minilang
