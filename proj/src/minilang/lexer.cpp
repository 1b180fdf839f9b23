#include "minilang/lexer.hpp"

#include <cctype>
#include <cstdlib>
#include <unordered_map>

#include "core/errors.hpp"

namespace bsnap::minilang {

const char* tok_kind_name(TokKind k) {
    switch (k) {
        case TokKind::Ident: return "identifier";
        case TokKind::Int: return "int literal";
        case TokKind::Float: return "float literal";
        case TokKind::Str: return "string literal";
        case TokKind::KwLet: return "'let'";
        case TokKind::KwFn: return "'fn'";
        case TokKind::KwClass: return "'class'";
        case TokKind::KwRecord: return "'record'";
        case TokKind::KwExport: return "'export'";
        case TokKind::KwIf: return "'if'";
        case TokKind::KwElse: return "'else'";
        case TokKind::KwWhile: return "'while'";
        case TokKind::KwFor: return "'for'";
        case TokKind::KwIn: return "'in'";
        case TokKind::KwReturn: return "'return'";
        case TokKind::KwThrow: return "'throw'";
        case TokKind::KwTry: return "'try'";
        case TokKind::KwCatch: return "'catch'";
        case TokKind::KwTest: return "'test'";
        case TokKind::KwTrue: return "'true'";
        case TokKind::KwFalse: return "'false'";
        case TokKind::KwNull: return "'null'";
        case TokKind::KwSelf: return "'self'";
        case TokKind::LParen: return "'('";
        case TokKind::RParen: return "')'";
        case TokKind::LBrace: return "'{'";
        case TokKind::RBrace: return "'}'";
        case TokKind::LBracket: return "'['";
        case TokKind::RBracket: return "']'";
        case TokKind::Comma: return "','";
        case TokKind::Semi: return "';'";
        case TokKind::Colon: return "':'";
        case TokKind::Dot: return "'.'";
        case TokKind::Assign: return "'='";
        case TokKind::Eq: return "'=='";
        case TokKind::Ne: return "'!='";
        case TokKind::Lt: return "'<'";
        case TokKind::Le: return "'<='";
        case TokKind::Gt: return "'>'";
        case TokKind::Ge: return "'>='";
        case TokKind::Plus: return "'+'";
        case TokKind::Minus: return "'-'";
        case TokKind::Star: return "'*'";
        case TokKind::Slash: return "'/'";
        case TokKind::Percent: return "'%'";
        case TokKind::AndAnd: return "'&&'";
        case TokKind::OrOr: return "'||'";
        case TokKind::Bang: return "'!'";
        case TokKind::Eof: return "end of input";
    }
    return "?";
}

namespace {

const std::unordered_map<std::string, TokKind>& keywords() {
    static const std::unordered_map<std::string, TokKind> kws = {
        {"let", TokKind::KwLet},       {"fn", TokKind::KwFn},
        {"class", TokKind::KwClass},   {"record", TokKind::KwRecord},
        {"export", TokKind::KwExport}, {"if", TokKind::KwIf},
        {"else", TokKind::KwElse},     {"while", TokKind::KwWhile},
        {"for", TokKind::KwFor},       {"in", TokKind::KwIn},
        {"return", TokKind::KwReturn}, {"throw", TokKind::KwThrow},
        {"try", TokKind::KwTry},       {"catch", TokKind::KwCatch},
        {"test", TokKind::KwTest},     {"true", TokKind::KwTrue},
        {"false", TokKind::KwFalse},   {"null", TokKind::KwNull},
        {"self", TokKind::KwSelf},
    };
    return kws;
}

struct Cursor {
    const std::string& src;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    bool done() const { return pos >= src.size(); }
    char peek(size_t off = 0) const {
        return pos + off < src.size() ? src[pos + off] : '\0';
    }
    char advance() {
        char c = src[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }
};

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
    Cursor c{source};
    std::vector<Token> out;

    auto push = [&](TokKind k, int line, int col, std::string text = {}) {
        Token t;
        t.kind = k;
        t.text = std::move(text);
        t.line = line;
        t.col = col;
        out.push_back(std::move(t));
    };

    while (!c.done()) {
        char ch = c.peek();
        int line = c.line, col = c.col;

        if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            c.advance();
            continue;
        }
        if (ch == '/' && c.peek(1) == '/') {
            while (!c.done() && c.peek() != '\n') c.advance();
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::string name;
            while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) ||
                                 c.peek() == '_'))
                name.push_back(c.advance());
            auto it = keywords().find(name);
            if (it != keywords().end())
                push(it->second, line, col);
            else
                push(TokKind::Ident, line, col, name);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::string num;
            while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek())))
                num.push_back(c.advance());
            bool is_float = false;
            if (c.peek() == '.' && std::isdigit(static_cast<unsigned char>(c.peek(1)))) {
                is_float = true;
                num.push_back(c.advance());
                while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek())))
                    num.push_back(c.advance());
            }
            Token t;
            t.line = line;
            t.col = col;
            if (is_float) {
                t.kind = TokKind::Float;
                t.float_value = std::strtod(num.c_str(), nullptr);
            } else {
                t.kind = TokKind::Int;
                errno = 0;
                t.int_value = std::strtoll(num.c_str(), nullptr, 10);
                if (errno == ERANGE)
                    throw LexError("integer literal out of range", line, col);
            }
            t.text = std::move(num);
            out.push_back(std::move(t));
            continue;
        }
        if (ch == '"') {
            c.advance();
            std::string val;
            while (true) {
                if (c.done())
                    throw LexError("unterminated string literal", line, col);
                char d = c.advance();
                if (d == '"') break;
                if (d == '\n')
                    throw LexError("newline in string literal", line, col);
                if (d == '\\') {
                    if (c.done())
                        throw LexError("unterminated escape", c.line, c.col);
                    char e = c.advance();
                    switch (e) {
                        case 'n': val.push_back('\n'); break;
                        case 't': val.push_back('\t'); break;
                        case '\\': val.push_back('\\'); break;
                        case '"': val.push_back('"'); break;
                        default:
                            throw LexError(std::string("unknown escape '\\") + e + "'",
                                           c.line, c.col - 2);
                    }
                } else {
                    val.push_back(d);
                }
            }
            push(TokKind::Str, line, col, std::move(val));
            continue;
        }

        auto two = [&](char second, TokKind both, TokKind single) {
            c.advance();
            if (c.peek() == second) {
                c.advance();
                push(both, line, col);
            } else {
                push(single, line, col);
            }
        };

        switch (ch) {
            case '(': c.advance(); push(TokKind::LParen, line, col); break;
            case ')': c.advance(); push(TokKind::RParen, line, col); break;
            case '{': c.advance(); push(TokKind::LBrace, line, col); break;
            case '}': c.advance(); push(TokKind::RBrace, line, col); break;
            case '[': c.advance(); push(TokKind::LBracket, line, col); break;
            case ']': c.advance(); push(TokKind::RBracket, line, col); break;
            case ',': c.advance(); push(TokKind::Comma, line, col); break;
            case ';': c.advance(); push(TokKind::Semi, line, col); break;
            case ':': c.advance(); push(TokKind::Colon, line, col); break;
            case '.': c.advance(); push(TokKind::Dot, line, col); break;
            case '+': c.advance(); push(TokKind::Plus, line, col); break;
            case '-': c.advance(); push(TokKind::Minus, line, col); break;
            case '*': c.advance(); push(TokKind::Star, line, col); break;
            case '/': c.advance(); push(TokKind::Slash, line, col); break;
            case '%': c.advance(); push(TokKind::Percent, line, col); break;
            case '=': two('=', TokKind::Eq, TokKind::Assign); break;
            case '!': two('=', TokKind::Ne, TokKind::Bang); break;
            case '<': two('=', TokKind::Le, TokKind::Lt); break;
            case '>': two('=', TokKind::Ge, TokKind::Gt); break;
            case '&':
                c.advance();
                if (c.peek() != '&')
                    throw LexError("stray '&'", line, col);
                c.advance();
                push(TokKind::AndAnd, line, col);
                break;
            case '|':
                c.advance();
                if (c.peek() != '|')
                    throw LexError("stray '|'", line, col);
                c.advance();
                push(TokKind::OrOr, line, col);
                break;
            default:
                throw LexError(std::string("illegal character '") + ch + "'", line, col);
        }
    }
    push(TokKind::Eof, c.line, c.col);
    return out;
}

}  // namespace bsnap::minilang
