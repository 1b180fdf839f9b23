#include "minilang/interp.hpp"

#include <climits>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>

#include "core/errors.hpp"
#include "minilang/builtins.hpp"

namespace bsnap::minilang {

const char* test_status_name(TestStatus s) {
    switch (s) {
        case TestStatus::Passed: return "passed";
        case TestStatus::Failed: return "failed";
        case TestStatus::Errored: return "errored";
    }
    return "?";
}

bool is_builtin(const std::string& name) {
    static const std::set<std::string> names = {
        "len",  "push", "pop",    "get",    "set",   "keys",   "split",
        "join", "str",  "typeof", "freeze", "print", "assert", "assert_eq"};
    return names.count(name) > 0;
}

namespace {

struct ReturnSignal {
    Value value;
};

// Assertion failures unwind straight to the test runner; they are not
// catchable from MiniLang code.
struct AssertFail {
    std::string detail;
};

constexpr int kMaxDepth = 1024;
constexpr int64_t kMaxSteps = 50'000'000;

struct Frame {
    ModulePtr module;
    InstancePtr self;
    std::vector<std::map<std::string, Value>> scopes;

    Value* lookup(const std::string& name) {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return &f->second;
        }
        return nullptr;
    }
};

class Interp {
  public:
    Interp(const Project& project, const RunOptions& opts)
        : project_(project), opts_(opts) {}

    std::string stdout_buf;

    void run_test_body(const TestRef& test) {
        Frame frame;
        frame.module = test.module;
        frame.scopes.emplace_back();
        exec_block(test.decl->body, frame, /*new_scope=*/false);
    }

  private:
    const Project& project_;
    RunOptions opts_;
    int depth_ = 0;
    int64_t steps_ = 0;

    void tick() {
        if (++steps_ > kMaxSteps) throw Error("execution step limit exceeded");
    }

    // ---- statements ----

    void exec_block(const std::vector<StmtPtr>& stmts, Frame& frame, bool new_scope) {
        if (new_scope) frame.scopes.emplace_back();
        struct ScopeGuard {
            Frame& f;
            bool active;
            ~ScopeGuard() {
                if (active) f.scopes.pop_back();
            }
        } guard{frame, new_scope};
        for (const auto& s : stmts) exec_stmt(*s, frame);
    }

    void exec_stmt(const Stmt& s, Frame& frame) {
        tick();
        switch (s.kind) {
            case Stmt::Kind::Let: {
                Value v = eval(*s.expr, frame);
                frame.scopes.back()[s.name] = std::move(v);
                return;
            }
            case Stmt::Kind::AssignVar: {
                Value* slot = frame.lookup(s.name);
                if (!slot) raise("NameError", "undefined variable '" + s.name + "'");
                *slot = eval(*s.expr, frame);
                return;
            }
            case Stmt::Kind::AssignField: {
                Value target = eval(*s.target, frame);
                if (!target.is_instance())
                    raise("TypeError", "field assignment on non-object");
                check_field_access(target.as_instance(), frame);
                target.as_instance()->fields[s.name] = eval(*s.expr, frame);
                return;
            }
            case Stmt::Kind::If: {
                if (truthy(eval(*s.expr, frame)))
                    exec_block(s.body, frame, true);
                else
                    exec_block(s.else_body, frame, true);
                return;
            }
            case Stmt::Kind::While: {
                while (truthy(eval(*s.expr, frame))) {
                    tick();
                    exec_block(s.body, frame, true);
                }
                return;
            }
            case Stmt::Kind::ForIn: {
                Value iter = eval(*s.expr, frame);
                if (!iter.is_list()) raise("TypeError", "for-in expects a list");
                // Iterate over a snapshot so in-loop mutation is safe.
                std::vector<Value> items = iter.as_list()->items;
                for (auto& item : items) {
                    tick();
                    frame.scopes.emplace_back();
                    frame.scopes.back()[s.name] = item;
                    struct ScopeGuard {
                        Frame& f;
                        ~ScopeGuard() { f.scopes.pop_back(); }
                    } guard{frame};
                    exec_block(s.body, frame, false);
                }
                return;
            }
            case Stmt::Kind::Return:
                throw ReturnSignal{s.expr ? eval(*s.expr, frame) : Value::null()};
            case Stmt::Kind::Throw: {
                Value msg = eval(*s.expr, frame);
                raise(s.name, msg.is_str() ? msg.as_str() : value_to_display(msg));
            }
            case Stmt::Kind::TryCatch: {
                try {
                    exec_block(s.body, frame, true);
                } catch (MiniLangThrow& t) {
                    frame.scopes.emplace_back();
                    frame.scopes.back()[s.name] = t.exc;
                    struct ScopeGuard {
                        Frame& f;
                        ~ScopeGuard() { f.scopes.pop_back(); }
                    } guard{frame};
                    exec_block(s.else_body, frame, false);
                }
                return;
            }
            case Stmt::Kind::ExprStmt:
                eval(*s.expr, frame);
                return;
        }
    }

    // ---- expressions ----

    Value eval(const Expr& e, Frame& frame) {
        tick();
        switch (e.kind) {
            case Expr::Kind::NullLit: return Value::null();
            case Expr::Kind::BoolLit: return Value::boolean(e.bool_value);
            case Expr::Kind::IntLit: return Value::integer(e.int_value);
            case Expr::Kind::FloatLit: return Value::floating(e.float_value);
            case Expr::Kind::StrLit: return Value::string(e.str_value);
            case Expr::Kind::ListLit: {
                auto list = std::make_shared<ListObj>();
                for (const auto& a : e.args) list->items.push_back(eval(*a, frame));
                return Value::list(std::move(list));
            }
            case Expr::Kind::MapLit: {
                auto map = std::make_shared<MapObj>();
                for (const auto& [k, v] : e.entries)
                    map->entries[k] = eval(*v, frame);
                return Value::map(std::move(map));
            }
            case Expr::Kind::Ident: {
                if (Value* slot = frame.lookup(e.str_value)) return *slot;
                raise("NameError", "undefined variable '" + e.str_value + "'");
            }
            case Expr::Kind::SelfRef: {
                if (!frame.self) raise("NameError", "'self' outside method");
                return Value::instance(frame.self);
            }
            case Expr::Kind::Field: return eval_field(e, frame);
            case Expr::Kind::Call: return eval_call(e, frame);
            case Expr::Kind::MethodCall: return eval_method_call(e, frame);
            case Expr::Kind::Binary: return eval_binary(e, frame);
            case Expr::Kind::Unary: {
                Value v = eval(*e.target, frame);
                if (e.un_op == UnOp::Not) {
                    if (!v.is_bool()) raise("TypeError", "'!' expects a bool");
                    return Value::boolean(!v.as_bool());
                }
                if (v.is_int()) {
                    if (v.as_int() == INT64_MIN)
                        raise("ArithmeticError", "integer overflow");
                    return Value::integer(-v.as_int());
                }
                if (v.is_float()) return Value::floating(-v.as_float());
                raise("TypeError", "unary '-' expects a number");
            }
        }
        raise("TypeError", "unreachable expression kind");
    }

    void check_field_access(const InstancePtr& inst, const Frame& frame) {
        if (inst->origin == Origin::Library &&
            frame.module->kind != ModuleKind::Library)
            raise("TypeError", "cannot access fields of library instance " +
                                   inst->class_id + " across the API boundary");
    }

    Value eval_field(const Expr& e, Frame& frame) {
        Value target = eval(*e.target, frame);
        if (target.is_exc()) {
            if (e.str_value == "type") return Value::string(target.as_exc()->type);
            if (e.str_value == "message")
                return Value::string(target.as_exc()->message);
            raise("NameError", "exception has no field '" + e.str_value + "'");
        }
        if (!target.is_instance())
            raise("TypeError", "field access on " + value_type_name(target));
        check_field_access(target.as_instance(), frame);
        const auto& fields = target.as_instance()->fields;
        auto it = fields.find(e.str_value);
        if (it == fields.end())
            raise("NameError", "undefined field '" + e.str_value + "'");
        return it->second;
    }

    std::vector<Value> eval_args(const std::vector<ExprPtr>& exprs, Frame& frame) {
        std::vector<Value> out;
        out.reserve(exprs.size());
        for (const auto& a : exprs) out.push_back(eval(*a, frame));
        return out;
    }

    bool is_library_export(const ModulePtr& mod, const std::string& name) const {
        return mod->kind == ModuleKind::Library && mod->exports.count(name) > 0;
    }

    bool probe_applies(const Frame& caller) const {
        if (!opts_.sink) return false;
        return caller.module->kind != ModuleKind::Library || opts_.record_internal;
    }

    template <typename Thunk>
    Value with_probe(bool active, const std::string& method, const Value* receiver,
                     const std::vector<Value>& args, Thunk&& thunk) {
        if (!active) return thunk();
        uint64_t token = opts_.sink->on_boundary_call(method, receiver, args);
        try {
            Value r = thunk();
            opts_.sink->on_boundary_return(token, r, false);
            return r;
        } catch (MiniLangThrow& t) {
            opts_.sink->on_boundary_return(token, t.exc, true);
            throw;
        }
    }

    Value eval_call(const Expr& e, Frame& frame) {
        const std::string& name = e.str_value;
        if (is_builtin(name)) return eval_builtin(e, frame);

        DeclRef decl;
        if (const FunctionDecl* fn = frame.module->find_function(name)) {
            for (const auto& f : frame.module->functions)
                if (f.get() == fn) decl = DeclRef{frame.module, f, nullptr};
        } else if (const ClassDecl* cls = frame.module->find_class(name)) {
            for (const auto& c : frame.module->classes)
                if (c.get() == cls) decl = DeclRef{frame.module, nullptr, c};
        } else {
            if (frame.module->kind != ModuleKind::Library) {
                auto it = project_.client_globals.find(name);
                if (it != project_.client_globals.end()) decl = it->second;
            }
            if (!decl.module) {
                auto it = project_.library_exports.find(name);
                if (it != project_.library_exports.end()) decl = it->second;
            }
            if (!decl.module)
                raise("NameError", "undefined function or class '" + name + "'");
        }

        std::vector<Value> args = eval_args(e.args, frame);

        if (decl.fn) {
            bool boundary =
                is_library_export(decl.module, name) && probe_applies(frame);
            std::string method = decl.module->name + "::" + name;
            return with_probe(boundary, method, nullptr, args, [&] {
                return invoke_function(decl.module, *decl.fn, nullptr, args);
            });
        }

        // Constructor: allocate + init; the boundary event is Class#init with
        // the new instance as result.
        const ClassDecl* cls = decl.cls.get();
        bool boundary = is_library_export(decl.module, name) && probe_applies(frame);
        std::string method = decl.module->name + "::" + name + "#init";
        return with_probe(boundary, method, nullptr, args, [&] {
            auto inst = std::make_shared<Instance>();
            inst->cls = cls;
            inst->class_id = decl.module->name + "::" + name;
            inst->origin = decl.module->kind == ModuleKind::Library ? Origin::Library
                                                                    : Origin::Client;
            if (const FunctionDecl* init = cls->find_method("init")) {
                invoke_function(decl.module, *init, inst, args);
            } else if (!args.empty()) {
                raise("ArityError", name + " takes no constructor arguments");
            }
            return Value::instance(inst);
        });
    }

    Value eval_method_call(const Expr& e, Frame& frame) {
        Value target = eval(*e.target, frame);
        if (!target.is_instance())
            raise("TypeError",
                  "method call on " + value_type_name(target) + " value");
        InstancePtr inst = target.as_instance();
        const FunctionDecl* method = inst->cls->find_method(e.str_value);
        if (!method)
            raise("NameError",
                  inst->cls->name + " has no method '" + e.str_value + "'");
        if (e.str_value == "init")
            raise("TypeError", "'init' cannot be called directly");

        std::vector<Value> args = eval_args(e.args, frame);
        std::string method_id = inst->class_id + "#" + e.str_value;
        ModulePtr mod = module_of_class(inst);
        bool boundary = inst->origin == Origin::Library && mod &&
                        mod->exports.count(inst->cls->name) > 0 &&
                        probe_applies(frame);
        return with_probe(boundary, method_id, &target, args, [&] {
            return invoke_function(mod ? mod : frame.module, *method, inst, args);
        });
    }

    ModulePtr module_of_class(const InstancePtr& inst) const {
        auto scan = [&](const std::vector<SourceFile>& files) -> ModulePtr {
            for (const auto& f : files)
                for (const auto& c : f.module->classes)
                    if (c.get() == inst->cls) return f.module;
            return nullptr;
        };
        if (ModulePtr m = scan(project_.library_files)) return m;
        if (ModulePtr m = scan(project_.client_files)) return m;
        return scan(project_.test_files);
    }

    Value invoke_function(const ModulePtr& mod, const FunctionDecl& fn,
                          InstancePtr self, const std::vector<Value>& args) {
        if (args.size() != fn.params.size())
            raise("ArityError", fn.name + " expects " +
                                    std::to_string(fn.params.size()) +
                                    " argument(s), got " + std::to_string(args.size()));
        if (++depth_ > kMaxDepth) {
            --depth_;
            throw Error("recursion limit exceeded");
        }
        struct DepthGuard {
            int& d;
            ~DepthGuard() { --d; }
        } guard{depth_};

        Frame frame;
        frame.module = mod;
        frame.self = std::move(self);
        frame.scopes.emplace_back();
        for (size_t i = 0; i < args.size(); ++i)
            frame.scopes.back()[fn.params[i]] = args[i];
        try {
            exec_block(fn.body, frame, false);
        } catch (ReturnSignal& r) {
            return std::move(r.value);
        }
        return Value::null();
    }

    // ---- operators ----

    static bool truthy(const Value& v) {
        if (!v.is_bool()) raise("TypeError", "condition must be a bool");
        return v.as_bool();
    }

    static double to_float_checked(double d) {
        if (!std::isfinite(d)) raise("ArithmeticError", "non-finite float result");
        return d;
    }

    Value eval_binary(const Expr& e, Frame& frame) {
        if (e.bin_op == BinOp::And || e.bin_op == BinOp::Or) {
            bool lhs = truthy(eval(*e.target, frame));
            if (e.bin_op == BinOp::And && !lhs) return Value::boolean(false);
            if (e.bin_op == BinOp::Or && lhs) return Value::boolean(true);
            return Value::boolean(truthy(eval(*e.rhs, frame)));
        }

        Value a = eval(*e.target, frame);
        Value b = eval(*e.rhs, frame);

        switch (e.bin_op) {
            case BinOp::Eq: return Value::boolean(values_equal(a, b));
            case BinOp::Ne: return Value::boolean(!values_equal(a, b));
            default: break;
        }

        bool numeric = (a.is_int() || a.is_float()) && (b.is_int() || b.is_float());

        switch (e.bin_op) {
            case BinOp::Add:
                if (a.is_str() && b.is_str()) return Value::string(a.as_str() + b.as_str());
                [[fallthrough]];
            case BinOp::Sub:
            case BinOp::Mul:
            case BinOp::Div: {
                if (!numeric)
                    raise("TypeError", "arithmetic on " + value_type_name(a) + " and " +
                                           value_type_name(b));
                if (a.is_int() && b.is_int()) return int_arith(e.bin_op, a.as_int(), b.as_int());
                double x = a.is_int() ? static_cast<double>(a.as_int()) : a.as_float();
                double y = b.is_int() ? static_cast<double>(b.as_int()) : b.as_float();
                switch (e.bin_op) {
                    case BinOp::Add: return Value::floating(to_float_checked(x + y));
                    case BinOp::Sub: return Value::floating(to_float_checked(x - y));
                    case BinOp::Mul: return Value::floating(to_float_checked(x * y));
                    case BinOp::Div:
                        if (y == 0.0) raise("ArithmeticError", "division by zero");
                        return Value::floating(to_float_checked(x / y));
                    default: break;
                }
                break;
            }
            case BinOp::Mod: {
                if (!a.is_int() || !b.is_int())
                    raise("TypeError", "'%' expects ints");
                if (b.as_int() == 0) raise("ArithmeticError", "modulo by zero");
                if (a.as_int() == INT64_MIN && b.as_int() == -1)
                    raise("ArithmeticError", "integer overflow");
                return Value::integer(a.as_int() % b.as_int());
            }
            case BinOp::Lt:
            case BinOp::Le:
            case BinOp::Gt:
            case BinOp::Ge: {
                int cmp;
                if (numeric) {
                    if (a.is_int() && b.is_int()) {
                        cmp = a.as_int() < b.as_int() ? -1 : a.as_int() > b.as_int() ? 1 : 0;
                    } else {
                        double x = a.is_int() ? static_cast<double>(a.as_int()) : a.as_float();
                        double y = b.is_int() ? static_cast<double>(b.as_int()) : b.as_float();
                        cmp = x < y ? -1 : x > y ? 1 : 0;
                    }
                } else if (a.is_str() && b.is_str()) {
                    cmp = a.as_str().compare(b.as_str());
                    cmp = cmp < 0 ? -1 : cmp > 0 ? 1 : 0;
                } else {
                    raise("TypeError", "comparison on " + value_type_name(a) + " and " +
                                           value_type_name(b));
                }
                switch (e.bin_op) {
                    case BinOp::Lt: return Value::boolean(cmp < 0);
                    case BinOp::Le: return Value::boolean(cmp <= 0);
                    case BinOp::Gt: return Value::boolean(cmp > 0);
                    default: return Value::boolean(cmp >= 0);
                }
            }
            default: break;
        }
        raise("TypeError", "unsupported operator");
    }

    static Value int_arith(BinOp op, int64_t a, int64_t b) {
        int64_t r = 0;
        switch (op) {
            case BinOp::Add:
                if (__builtin_add_overflow(a, b, &r))
                    raise("ArithmeticError", "integer overflow");
                return Value::integer(r);
            case BinOp::Sub:
                if (__builtin_sub_overflow(a, b, &r))
                    raise("ArithmeticError", "integer overflow");
                return Value::integer(r);
            case BinOp::Mul:
                if (__builtin_mul_overflow(a, b, &r))
                    raise("ArithmeticError", "integer overflow");
                return Value::integer(r);
            case BinOp::Div:
                if (b == 0) raise("ArithmeticError", "division by zero");
                if (a == INT64_MIN && b == -1)
                    raise("ArithmeticError", "integer overflow");
                return Value::integer(a / b);
            default: break;
        }
        raise("TypeError", "unreachable");
    }

    // ---- builtins ----

    void expect_arity(const Expr& e, size_t n) {
        if (e.args.size() != n)
            raise("ArityError", e.str_value + " expects " + std::to_string(n) +
                                    " argument(s), got " + std::to_string(e.args.size()));
    }

    Value eval_builtin(const Expr& e, Frame& frame) {
        const std::string& name = e.str_value;

        if (name == "assert" || name == "assert_eq") {
            if (frame.module->kind != ModuleKind::Test)
                raise("TypeError", name + " is only available in test code");
            if (name == "assert") {
                expect_arity(e, 1);
                Value v = eval(*e.args[0], frame);
                if (!v.is_bool()) raise("TypeError", "assert expects a bool");
                if (!v.as_bool())
                    throw AssertFail{"assert failed at line " + std::to_string(e.line)};
                return Value::null();
            }
            expect_arity(e, 2);
            Value a = eval(*e.args[0], frame);
            Value b = eval(*e.args[1], frame);
            if (!values_equal(a, b))
                throw AssertFail{"assert_eq: " + value_to_display(a) +
                                 " != " + value_to_display(b)};
            return Value::null();
        }

        std::vector<Value> args = eval_args(e.args, frame);
        auto arity = [&](size_t n) {
            if (args.size() != n)
                raise("ArityError", name + " expects " + std::to_string(n) +
                                        " argument(s), got " +
                                        std::to_string(args.size()));
        };

        if (name == "len") {
            arity(1);
            const Value& v = args[0];
            if (v.is_str()) return Value::integer(static_cast<int64_t>(v.as_str().size()));
            if (v.is_list())
                return Value::integer(static_cast<int64_t>(v.as_list()->items.size()));
            if (v.is_map())
                return Value::integer(static_cast<int64_t>(v.as_map()->entries.size()));
            raise("TypeError", "len expects str, list, or map");
        }
        if (name == "push") {
            arity(2);
            if (!args[0].is_list()) raise("TypeError", "push expects a list");
            if (args[0].as_list()->fixed)
                raise("FixedSizeError", "cannot push to a fixed-size list");
            args[0].as_list()->items.push_back(args[1]);
            return Value::null();
        }
        if (name == "pop") {
            arity(1);
            if (!args[0].is_list()) raise("TypeError", "pop expects a list");
            auto& list = *args[0].as_list();
            if (list.fixed) raise("FixedSizeError", "cannot pop from a fixed-size list");
            if (list.items.empty()) raise("IndexError", "pop from empty list");
            Value v = std::move(list.items.back());
            list.items.pop_back();
            return v;
        }
        if (name == "get") {
            arity(2);
            if (args[0].is_list()) {
                if (!args[1].is_int()) raise("TypeError", "list index must be int");
                int64_t i = args[1].as_int();
                const auto& items = args[0].as_list()->items;
                if (i < 0 || static_cast<size_t>(i) >= items.size())
                    raise("IndexError", "index " + std::to_string(i) + " out of range");
                return items[static_cast<size_t>(i)];
            }
            if (args[0].is_map()) {
                if (!args[1].is_str()) raise("TypeError", "map key must be str");
                const auto& entries = args[0].as_map()->entries;
                auto it = entries.find(args[1].as_str());
                if (it == entries.end())
                    raise("KeyError", "missing key '" + args[1].as_str() + "'");
                return it->second;
            }
            raise("TypeError", "get expects a list or map");
        }
        if (name == "set") {
            arity(3);
            if (args[0].is_list()) {
                if (!args[1].is_int()) raise("TypeError", "list index must be int");
                int64_t i = args[1].as_int();
                auto& items = args[0].as_list()->items;
                // Allowed on fixed lists: the length does not change.
                if (i < 0 || static_cast<size_t>(i) >= items.size())
                    raise("IndexError", "index " + std::to_string(i) + " out of range");
                items[static_cast<size_t>(i)] = args[2];
                return Value::null();
            }
            if (args[0].is_map()) {
                if (!args[1].is_str()) raise("TypeError", "map key must be str");
                args[0].as_map()->entries[args[1].as_str()] = args[2];
                return Value::null();
            }
            raise("TypeError", "set expects a list or map");
        }
        if (name == "keys") {
            arity(1);
            if (!args[0].is_map()) raise("TypeError", "keys expects a map");
            auto list = std::make_shared<ListObj>();
            for (const auto& [k, v] : args[0].as_map()->entries)
                list->items.push_back(Value::string(k));
            return Value::list(std::move(list));
        }
        if (name == "split") {
            arity(2);
            if (!args[0].is_str() || !args[1].is_str())
                raise("TypeError", "split expects (str, str)");
            const std::string& s = args[0].as_str();
            const std::string& delim = args[1].as_str();
            if (delim.empty()) raise("TypeError", "split delimiter must be non-empty");
            auto list = std::make_shared<ListObj>();
            size_t start = 0;
            while (true) {
                size_t pos = s.find(delim, start);
                if (pos == std::string::npos) {
                    list->items.push_back(Value::string(s.substr(start)));
                    break;
                }
                list->items.push_back(Value::string(s.substr(start, pos - start)));
                start = pos + delim.size();
            }
            return Value::list(std::move(list));
        }
        if (name == "join") {
            arity(2);
            if (!args[0].is_list() || !args[1].is_str())
                raise("TypeError", "join expects (list, str)");
            std::string out;
            bool first = true;
            for (const auto& item : args[0].as_list()->items) {
                if (!item.is_str()) raise("TypeError", "join expects a list of str");
                if (!first) out += args[1].as_str();
                first = false;
                out += item.as_str();
            }
            return Value::string(std::move(out));
        }
        if (name == "str") {
            arity(1);
            return Value::string(value_to_display(args[0]));
        }
        if (name == "typeof") {
            arity(1);
            return Value::string(value_type_name(args[0]));
        }
        if (name == "freeze") {
            arity(1);
            if (!args[0].is_list()) raise("TypeError", "freeze expects a list");
            args[0].as_list()->fixed = true;
            return args[0];
        }
        if (name == "print") {
            arity(1);
            stdout_buf += value_to_display(args[0]);
            stdout_buf.push_back('\n');
            return Value::null();
        }
        raise("NameError", "unknown builtin '" + name + "'");
    }
};

}  // namespace

TestOutcome run_test(const Project& project, const std::string& test_id,
                     const RunOptions& opts) {
    const TestRef* test = project.find_test(test_id);
    if (!test) throw Error("unknown test id '" + test_id + "'");

    TestOutcome outcome;
    outcome.test_id = test_id;
    Interp interp(project, opts);
    try {
        interp.run_test_body(*test);
        outcome.status = TestStatus::Passed;
    } catch (AssertFail& f) {
        outcome.status = TestStatus::Failed;
        outcome.detail = f.detail;
    } catch (MiniLangThrow& t) {
        outcome.status = TestStatus::Errored;
        outcome.detail = value_to_display(t.exc);
    } catch (ReturnSignal&) {
        outcome.status = TestStatus::Passed;
    } catch (const Error& e) {
        outcome.status = TestStatus::Errored;
        outcome.detail = std::string("internal: ") + e.what();
    }
    outcome.captured_stdout = interp.stdout_buf;
    return outcome;
}

std::vector<TestOutcome> run_all_tests(const Project& project,
                                       const ProbeFactory& factory,
                                       bool record_internal) {
    std::vector<TestOutcome> outcomes;
    for (const auto& test : project.tests) {
        RunOptions opts;
        opts.record_internal = record_internal;
        opts.sink = factory ? factory(test.id) : nullptr;
        outcomes.push_back(run_test(project, test.id, opts));
    }
    return outcomes;
}

}  // namespace bsnap::minilang
