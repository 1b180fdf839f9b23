#include "minilang/parser.hpp"

#include <memory>

#include "core/errors.hpp"
#include "minilang/lexer.hpp"

namespace bsnap::minilang {

const char* module_kind_name(ModuleKind k) {
    switch (k) {
        case ModuleKind::Library: return "library";
        case ModuleKind::Client: return "client";
        case ModuleKind::Test: return "test";
    }
    return "?";
}

namespace {

class Parser {
  public:
    Parser(std::vector<Token> toks, std::string module_name, ModuleKind kind)
        : toks_(std::move(toks)), name_(std::move(module_name)), kind_(kind) {}

    ModulePtr run() {
        auto mod = std::make_shared<Module>();
        mod->name = name_;
        mod->kind = kind_;
        while (!at(TokKind::Eof)) {
            bool exported = false;
            if (at(TokKind::KwExport)) {
                if (kind_ != ModuleKind::Library)
                    fail("'export' is only allowed in library modules");
                advance();
                exported = true;
            }
            if (at(TokKind::KwFn)) {
                auto fn = parse_function();
                if (mod->find_function(fn->name) || mod->find_class(fn->name))
                    fail("duplicate declaration '" + fn->name + "'");
                if (exported) mod->exports.insert(fn->name);
                mod->functions.push_back(std::move(fn));
            } else if (at(TokKind::KwClass) || at(TokKind::KwRecord)) {
                auto cls = parse_class();
                if (mod->find_function(cls->name) || mod->find_class(cls->name))
                    fail("duplicate declaration '" + cls->name + "'");
                if (exported) mod->exports.insert(cls->name);
                mod->classes.push_back(std::move(cls));
            } else if (at(TokKind::KwTest)) {
                if (kind_ != ModuleKind::Test)
                    fail("'test' blocks are only allowed in test modules");
                mod->tests.push_back(parse_test());
            } else {
                fail("expected declaration (fn, class, record class"
                     + std::string(kind_ == ModuleKind::Test ? ", test)" : ")"));
            }
        }
        return mod;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::string name_;
    ModuleKind kind_;

    const Token& cur() const { return toks_[pos_]; }
    bool at(TokKind k) const { return cur().kind == k; }
    const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " (got " + tok_kind_name(cur().kind) + ")", cur().line,
                         cur().col);
    }

    const Token& expect(TokKind k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        return advance();
    }

    FunctionPtr parse_function() {
        auto fn = std::make_shared<FunctionDecl>();
        const Token& kw = expect(TokKind::KwFn, "'fn'");
        fn->line = kw.line;
        fn->col = kw.col;
        fn->name = expect(TokKind::Ident, "function name").text;
        parse_params(fn->params);
        fn->body = parse_block();
        return fn;
    }

    FunctionPtr parse_method() {
        auto fn = std::make_shared<FunctionDecl>();
        const Token& id = expect(TokKind::Ident, "method name");
        fn->line = id.line;
        fn->col = id.col;
        fn->name = id.text;
        parse_params(fn->params);
        fn->body = parse_block();
        return fn;
    }

    void parse_params(std::vector<std::string>& out) {
        expect(TokKind::LParen, "'('");
        if (!at(TokKind::RParen)) {
            out.push_back(expect(TokKind::Ident, "parameter name").text);
            while (at(TokKind::Comma)) {
                advance();
                out.push_back(expect(TokKind::Ident, "parameter name").text);
            }
        }
        expect(TokKind::RParen, "')'");
    }

    ClassPtr parse_class() {
        auto cls = std::make_shared<ClassDecl>();
        if (at(TokKind::KwRecord)) {
            advance();
            cls->is_record = true;
        }
        const Token& kw = expect(TokKind::KwClass, "'class'");
        cls->line = kw.line;
        cls->col = kw.col;
        cls->name = expect(TokKind::Ident, "class name").text;
        expect(TokKind::LBrace, "'{'");
        while (!at(TokKind::RBrace)) {
            auto m = parse_method();
            if (cls->find_method(m->name))
                fail("duplicate method '" + m->name + "'");
            cls->methods.push_back(std::move(m));
        }
        expect(TokKind::RBrace, "'}'");
        return cls;
    }

    TestPtr parse_test() {
        auto t = std::make_shared<TestDecl>();
        const Token& kw = expect(TokKind::KwTest, "'test'");
        t->line = kw.line;
        t->col = kw.col;
        t->name = expect(TokKind::Str, "test name string").text;
        t->body = parse_block();
        return t;
    }

    std::vector<StmtPtr> parse_block() {
        expect(TokKind::LBrace, "'{'");
        std::vector<StmtPtr> stmts;
        while (!at(TokKind::RBrace)) stmts.push_back(parse_stmt());
        expect(TokKind::RBrace, "'}'");
        return stmts;
    }

    StmtPtr parse_stmt() {
        auto s = std::make_shared<Stmt>();
        s->line = cur().line;
        s->col = cur().col;
        switch (cur().kind) {
            case TokKind::KwLet: {
                advance();
                s->kind = Stmt::Kind::Let;
                s->name = expect(TokKind::Ident, "variable name").text;
                expect(TokKind::Assign, "'='");
                s->expr = parse_expr();
                expect(TokKind::Semi, "';'");
                return s;
            }
            case TokKind::KwIf: {
                advance();
                s->kind = Stmt::Kind::If;
                expect(TokKind::LParen, "'('");
                s->expr = parse_expr();
                expect(TokKind::RParen, "')'");
                s->body = parse_block();
                if (at(TokKind::KwElse)) {
                    advance();
                    if (at(TokKind::KwIf))
                        s->else_body.push_back(parse_stmt());
                    else
                        s->else_body = parse_block();
                }
                return s;
            }
            case TokKind::KwWhile: {
                advance();
                s->kind = Stmt::Kind::While;
                expect(TokKind::LParen, "'('");
                s->expr = parse_expr();
                expect(TokKind::RParen, "')'");
                s->body = parse_block();
                return s;
            }
            case TokKind::KwFor: {
                advance();
                s->kind = Stmt::Kind::ForIn;
                expect(TokKind::LParen, "'('");
                s->name = expect(TokKind::Ident, "loop variable").text;
                expect(TokKind::KwIn, "'in'");
                s->expr = parse_expr();
                expect(TokKind::RParen, "')'");
                s->body = parse_block();
                return s;
            }
            case TokKind::KwReturn: {
                advance();
                s->kind = Stmt::Kind::Return;
                if (!at(TokKind::Semi)) s->expr = parse_expr();
                expect(TokKind::Semi, "';'");
                return s;
            }
            case TokKind::KwThrow: {
                advance();
                s->kind = Stmt::Kind::Throw;
                s->name = expect(TokKind::Ident, "exception type name").text;
                expect(TokKind::LParen, "'('");
                s->expr = parse_expr();
                expect(TokKind::RParen, "')'");
                expect(TokKind::Semi, "';'");
                return s;
            }
            case TokKind::KwTry: {
                advance();
                s->kind = Stmt::Kind::TryCatch;
                s->body = parse_block();
                expect(TokKind::KwCatch, "'catch'");
                expect(TokKind::LParen, "'('");
                s->name = expect(TokKind::Ident, "catch variable").text;
                expect(TokKind::RParen, "')'");
                s->else_body = parse_block();
                return s;
            }
            default: {
                ExprPtr e = parse_expr();
                if (at(TokKind::Assign)) {
                    advance();
                    if (e->kind == Expr::Kind::Ident) {
                        s->kind = Stmt::Kind::AssignVar;
                        s->name = e->str_value;
                    } else if (e->kind == Expr::Kind::Field) {
                        s->kind = Stmt::Kind::AssignField;
                        s->name = e->str_value;
                        s->target = e->target;
                    } else {
                        throw ParseError("invalid assignment target", e->line, e->col);
                    }
                    s->expr = parse_expr();
                } else {
                    s->kind = Stmt::Kind::ExprStmt;
                    s->expr = std::move(e);
                }
                expect(TokKind::Semi, "';'");
                return s;
            }
        }
    }

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Binary;
        e->line = lhs->line;
        e->col = lhs->col;
        e->bin_op = op;
        e->target = std::move(lhs);
        e->rhs = std::move(rhs);
        return e;
    }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (at(TokKind::OrOr)) {
            advance();
            e = make_binary(BinOp::Or, std::move(e), parse_and());
        }
        return e;
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_equality();
        while (at(TokKind::AndAnd)) {
            advance();
            e = make_binary(BinOp::And, std::move(e), parse_equality());
        }
        return e;
    }

    ExprPtr parse_equality() {
        ExprPtr e = parse_relational();
        while (at(TokKind::Eq) || at(TokKind::Ne)) {
            BinOp op = at(TokKind::Eq) ? BinOp::Eq : BinOp::Ne;
            advance();
            e = make_binary(op, std::move(e), parse_relational());
        }
        return e;
    }

    ExprPtr parse_relational() {
        ExprPtr e = parse_additive();
        while (at(TokKind::Lt) || at(TokKind::Le) || at(TokKind::Gt) ||
               at(TokKind::Ge)) {
            BinOp op = at(TokKind::Lt)   ? BinOp::Lt
                       : at(TokKind::Le) ? BinOp::Le
                       : at(TokKind::Gt) ? BinOp::Gt
                                         : BinOp::Ge;
            advance();
            e = make_binary(op, std::move(e), parse_additive());
        }
        return e;
    }

    ExprPtr parse_additive() {
        ExprPtr e = parse_multiplicative();
        while (at(TokKind::Plus) || at(TokKind::Minus)) {
            BinOp op = at(TokKind::Plus) ? BinOp::Add : BinOp::Sub;
            advance();
            e = make_binary(op, std::move(e), parse_multiplicative());
        }
        return e;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr e = parse_unary();
        while (at(TokKind::Star) || at(TokKind::Slash) || at(TokKind::Percent)) {
            BinOp op = at(TokKind::Star)    ? BinOp::Mul
                       : at(TokKind::Slash) ? BinOp::Div
                                            : BinOp::Mod;
            advance();
            e = make_binary(op, std::move(e), parse_unary());
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (at(TokKind::Bang) || at(TokKind::Minus)) {
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Unary;
            e->line = cur().line;
            e->col = cur().col;
            e->un_op = at(TokKind::Bang) ? UnOp::Not : UnOp::Neg;
            advance();
            e->target = parse_unary();
            return e;
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (true) {
            if (at(TokKind::Dot)) {
                advance();
                std::string member = expect(TokKind::Ident, "member name").text;
                auto n = std::make_shared<Expr>();
                n->line = e->line;
                n->col = e->col;
                n->str_value = std::move(member);
                n->target = std::move(e);
                if (at(TokKind::LParen)) {
                    n->kind = Expr::Kind::MethodCall;
                    n->args = parse_args();
                } else {
                    n->kind = Expr::Kind::Field;
                }
                e = std::move(n);
            } else if (at(TokKind::LParen) && e->kind == Expr::Kind::Ident) {
                auto n = std::make_shared<Expr>();
                n->kind = Expr::Kind::Call;
                n->line = e->line;
                n->col = e->col;
                n->str_value = e->str_value;
                n->args = parse_args();
                e = std::move(n);
            } else {
                break;
            }
        }
        return e;
    }

    std::vector<ExprPtr> parse_args() {
        expect(TokKind::LParen, "'('");
        std::vector<ExprPtr> args;
        if (!at(TokKind::RParen)) {
            args.push_back(parse_expr());
            while (at(TokKind::Comma)) {
                advance();
                args.push_back(parse_expr());
            }
        }
        expect(TokKind::RParen, "')'");
        return args;
    }

    ExprPtr parse_primary() {
        auto e = std::make_shared<Expr>();
        e->line = cur().line;
        e->col = cur().col;
        switch (cur().kind) {
            case TokKind::KwNull:
                advance();
                e->kind = Expr::Kind::NullLit;
                return e;
            case TokKind::KwTrue:
            case TokKind::KwFalse:
                e->kind = Expr::Kind::BoolLit;
                e->bool_value = at(TokKind::KwTrue);
                advance();
                return e;
            case TokKind::Int:
                e->kind = Expr::Kind::IntLit;
                e->int_value = cur().int_value;
                advance();
                return e;
            case TokKind::Float:
                e->kind = Expr::Kind::FloatLit;
                e->float_value = cur().float_value;
                advance();
                return e;
            case TokKind::Str:
                e->kind = Expr::Kind::StrLit;
                e->str_value = cur().text;
                advance();
                return e;
            case TokKind::Ident:
                e->kind = Expr::Kind::Ident;
                e->str_value = cur().text;
                advance();
                return e;
            case TokKind::KwSelf:
                advance();
                e->kind = Expr::Kind::SelfRef;
                return e;
            case TokKind::LParen: {
                advance();
                ExprPtr inner = parse_expr();
                expect(TokKind::RParen, "')'");
                return inner;
            }
            case TokKind::LBracket: {
                advance();
                e->kind = Expr::Kind::ListLit;
                if (!at(TokKind::RBracket)) {
                    e->args.push_back(parse_expr());
                    while (at(TokKind::Comma)) {
                        advance();
                        e->args.push_back(parse_expr());
                    }
                }
                expect(TokKind::RBracket, "']'");
                return e;
            }
            case TokKind::LBrace: {
                advance();
                e->kind = Expr::Kind::MapLit;
                if (!at(TokKind::RBrace)) {
                    auto entry = [&]() {
                        std::string key = expect(TokKind::Str, "map key string").text;
                        expect(TokKind::Colon, "':'");
                        e->entries.emplace_back(std::move(key), parse_expr());
                    };
                    entry();
                    while (at(TokKind::Comma)) {
                        advance();
                        entry();
                    }
                }
                expect(TokKind::RBrace, "'}'");
                return e;
            }
            default:
                fail("expected expression");
        }
    }
};

}  // namespace

ModulePtr parse_module(const std::string& source, const std::string& name,
                       ModuleKind kind) {
    return Parser(tokenize(source), name, kind).run();
}

}  // namespace bsnap::minilang
