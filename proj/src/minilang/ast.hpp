#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bsnap::minilang {

// AST nodes are immutable after parsing; modules and declarations are shared
// freely between Project copies (mutation clones only the declaration it
// replaces).

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Not, Neg };

struct Expr {
    enum class Kind {
        NullLit,
        BoolLit,
        IntLit,
        FloatLit,
        StrLit,
        ListLit,
        MapLit,
        Ident,
        SelfRef,
        Field,     // target.name
        Call,      // callee(args) where callee is Ident (function/class/builtin)
        MethodCall,  // target.name(args)
        Binary,
        Unary,
    };

    Kind kind;
    int line = 0, col = 0;

    bool bool_value = false;
    int64_t int_value = 0;
    double float_value = 0.0;
    std::string str_value;  // string literal, identifier, field/method name

    ExprPtr target;                // Field / MethodCall / Unary / Binary lhs
    ExprPtr rhs;                   // Binary rhs
    std::vector<ExprPtr> args;     // Call / MethodCall args, ListLit items
    std::vector<std::pair<std::string, ExprPtr>> entries;  // MapLit
    BinOp bin_op = BinOp::Add;
    UnOp un_op = UnOp::Not;
};

struct Stmt {
    enum class Kind {
        Let,        // let name = expr;
        AssignVar,  // name = expr;
        AssignField,  // target.name = expr;
        If,
        While,
        ForIn,  // for (name in expr) block
        Return,
        Throw,  // throw Type(expr);
        TryCatch,
        ExprStmt,
    };

    Kind kind;
    int line = 0, col = 0;

    std::string name;  // let/assign var, for-in var, catch var, throw type
    ExprPtr expr;      // value / condition / iterable / returned / thrown message
    ExprPtr target;    // AssignField target
    std::vector<StmtPtr> body;       // then / loop / try body
    std::vector<StmtPtr> else_body;  // else / catch body
};

struct FunctionDecl {
    std::string name;
    std::vector<std::string> params;
    std::vector<StmtPtr> body;
    int line = 0, col = 0;
};
using FunctionPtr = std::shared_ptr<const FunctionDecl>;

struct ClassDecl {
    std::string name;
    bool is_record = false;
    std::vector<FunctionPtr> methods;  // `init` is the constructor when present
    int line = 0, col = 0;

    const FunctionDecl* find_method(const std::string& m) const {
        for (const auto& f : methods)
            if (f->name == m) return f.get();
        return nullptr;
    }
};
using ClassPtr = std::shared_ptr<const ClassDecl>;

struct TestDecl {
    std::string name;
    std::vector<StmtPtr> body;
    int line = 0, col = 0;
};
using TestPtr = std::shared_ptr<const TestDecl>;

enum class ModuleKind { Library, Client, Test };

struct Module {
    std::string name;
    ModuleKind kind = ModuleKind::Client;
    std::vector<FunctionPtr> functions;
    std::vector<ClassPtr> classes;
    std::vector<TestPtr> tests;       // test modules only
    std::set<std::string> exports;    // library modules only

    const FunctionDecl* find_function(const std::string& n) const {
        for (const auto& f : functions)
            if (f->name == n) return f.get();
        return nullptr;
    }
    const ClassDecl* find_class(const std::string& n) const {
        for (const auto& c : classes)
            if (c->name == n) return c.get();
        return nullptr;
    }
};
using ModulePtr = std::shared_ptr<const Module>;

const char* module_kind_name(ModuleKind k);

}  // namespace bsnap::minilang
