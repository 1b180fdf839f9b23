#include "minilang/printer.hpp"

#include <charconv>
#include <cstdio>

namespace bsnap::minilang {

namespace {

std::string escape_str(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

// Float literals must stay in digits '.' digits form for the lexer.
std::string float_literal(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, end);
    if (s.find('e') == std::string::npos && s.find('E') == std::string::npos) {
        if (s.find('.') == std::string::npos) s += ".0";
        return s;
    }
    // Exact decimal expansion fallback for values to_chars renders scientific.
    std::vector<char> big(1200);
    std::snprintf(big.data(), big.size(), "%.1074f", v);
    std::string t(big.data());
    size_t last = t.find_last_not_of('0');
    if (t[last] == '.') ++last;
    return t.substr(0, last + 1);
}

struct Printer {
    std::string out;
    int indent = 0;

    void nl() {
        out.push_back('\n');
        out.append(static_cast<size_t>(indent) * 2, ' ');
    }

    void expr(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::NullLit: out += "null"; break;
            case Expr::Kind::BoolLit: out += e.bool_value ? "true" : "false"; break;
            case Expr::Kind::IntLit: out += std::to_string(e.int_value); break;
            case Expr::Kind::FloatLit: out += float_literal(e.float_value); break;
            case Expr::Kind::StrLit: out += escape_str(e.str_value); break;
            case Expr::Kind::Ident: out += e.str_value; break;
            case Expr::Kind::SelfRef: out += "self"; break;
            case Expr::Kind::Field:
                expr(*e.target);
                out += "." + e.str_value;
                break;
            case Expr::Kind::Call:
                out += e.str_value;
                args(e.args);
                break;
            case Expr::Kind::MethodCall:
                expr(*e.target);
                out += "." + e.str_value;
                args(e.args);
                break;
            case Expr::Kind::Binary:
                out.push_back('(');
                expr(*e.target);
                out += std::string(" ") + bin_op_text(e.bin_op) + " ";
                expr(*e.rhs);
                out.push_back(')');
                break;
            case Expr::Kind::Unary:
                out.push_back('(');
                out += e.un_op == UnOp::Not ? "!" : "-";
                expr(*e.target);
                out.push_back(')');
                break;
            case Expr::Kind::ListLit: {
                out.push_back('[');
                bool first = true;
                for (const auto& a : e.args) {
                    if (!first) out += ", ";
                    first = false;
                    expr(*a);
                }
                out.push_back(']');
                break;
            }
            case Expr::Kind::MapLit: {
                out.push_back('{');
                bool first = true;
                for (const auto& [k, v] : e.entries) {
                    if (!first) out += ", ";
                    first = false;
                    out += escape_str(k) + ": ";
                    expr(*v);
                }
                out.push_back('}');
                break;
            }
        }
    }

    static const char* bin_op_text(BinOp op) {
        switch (op) {
            case BinOp::Add: return "+";
            case BinOp::Sub: return "-";
            case BinOp::Mul: return "*";
            case BinOp::Div: return "/";
            case BinOp::Mod: return "%";
            case BinOp::Eq: return "==";
            case BinOp::Ne: return "!=";
            case BinOp::Lt: return "<";
            case BinOp::Le: return "<=";
            case BinOp::Gt: return ">";
            case BinOp::Ge: return ">=";
            case BinOp::And: return "&&";
            case BinOp::Or: return "||";
        }
        return "?";
    }

    void args(const std::vector<ExprPtr>& as) {
        out.push_back('(');
        bool first = true;
        for (const auto& a : as) {
            if (!first) out += ", ";
            first = false;
            expr(*a);
        }
        out.push_back(')');
    }

    void block(const std::vector<StmtPtr>& stmts) {
        out.push_back('{');
        ++indent;
        for (const auto& s : stmts) {
            nl();
            stmt(*s);
        }
        --indent;
        nl();
        out.push_back('}');
    }

    void stmt(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::Let:
                out += "let " + s.name + " = ";
                expr(*s.expr);
                out.push_back(';');
                break;
            case Stmt::Kind::AssignVar:
                out += s.name + " = ";
                expr(*s.expr);
                out.push_back(';');
                break;
            case Stmt::Kind::AssignField:
                expr(*s.target);
                out += "." + s.name + " = ";
                expr(*s.expr);
                out.push_back(';');
                break;
            case Stmt::Kind::If:
                out += "if (";
                expr(*s.expr);
                out += ") ";
                block(s.body);
                if (!s.else_body.empty()) {
                    out += " else ";
                    if (s.else_body.size() == 1 &&
                        s.else_body[0]->kind == Stmt::Kind::If) {
                        stmt(*s.else_body[0]);
                    } else {
                        block(s.else_body);
                    }
                }
                break;
            case Stmt::Kind::While:
                out += "while (";
                expr(*s.expr);
                out += ") ";
                block(s.body);
                break;
            case Stmt::Kind::ForIn:
                out += "for (" + s.name + " in ";
                expr(*s.expr);
                out += ") ";
                block(s.body);
                break;
            case Stmt::Kind::Return:
                out += "return";
                if (s.expr) {
                    out.push_back(' ');
                    expr(*s.expr);
                }
                out.push_back(';');
                break;
            case Stmt::Kind::Throw:
                out += "throw " + s.name + "(";
                expr(*s.expr);
                out += ");";
                break;
            case Stmt::Kind::TryCatch:
                out += "try ";
                block(s.body);
                out += " catch (" + s.name + ") ";
                block(s.else_body);
                break;
            case Stmt::Kind::ExprStmt:
                expr(*s.expr);
                out.push_back(';');
                break;
        }
    }

    void function(const FunctionDecl& fn, const char* kw) {
        if (kw) out += kw;
        out += fn.name + "(";
        bool first = true;
        for (const auto& p : fn.params) {
            if (!first) out += ", ";
            first = false;
            out += p;
        }
        out += ") ";
        block(fn.body);
    }
};

}  // namespace

std::string pretty_print_function(const FunctionDecl& fn, int indent) {
    Printer p;
    p.indent = indent;
    p.function(fn, indent == 0 ? "fn " : nullptr);
    return std::move(p.out);
}

std::string pretty_print_class(const ClassDecl& cls) {
    Printer p;
    if (cls.is_record) p.out += "record ";
    p.out += "class " + cls.name + " {";
    ++p.indent;
    for (const auto& m : cls.methods) {
        p.nl();
        p.function(*m, nullptr);
    }
    --p.indent;
    p.nl();
    p.out += "}";
    return std::move(p.out);
}

std::string pretty_print(const Module& mod) {
    std::string out;
    for (const auto& f : mod.functions) {
        if (mod.exports.count(f->name)) out += "export ";
        out += pretty_print_function(*f) + "\n\n";
    }
    for (const auto& c : mod.classes) {
        if (mod.exports.count(c->name)) out += "export ";
        out += pretty_print_class(*c) + "\n\n";
    }
    for (const auto& t : mod.tests) {
        Printer p;
        p.out = "test " + escape_str(t->name) + " ";
        p.block(t->body);
        out += p.out + "\n\n";
    }
    return out;
}

bool structurally_equal(const Module& a, const Module& b) {
    return a.name == b.name && a.kind == b.kind && a.exports == b.exports &&
           pretty_print(a) == pretty_print(b);
}

}  // namespace bsnap::minilang
