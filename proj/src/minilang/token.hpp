#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bsnap::minilang {

enum class TokKind {
    Ident,
    Int,
    Float,
    Str,
    // keywords
    KwLet,
    KwFn,
    KwClass,
    KwRecord,
    KwExport,
    KwIf,
    KwElse,
    KwWhile,
    KwFor,
    KwIn,
    KwReturn,
    KwThrow,
    KwTry,
    KwCatch,
    KwTest,
    KwTrue,
    KwFalse,
    KwNull,
    KwSelf,
    // punctuation / operators
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    Assign,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    AndAnd,
    OrOr,
    Bang,
    Eof,
};

struct Token {
    TokKind kind;
    std::string text;     // identifier name or decoded string literal
    int64_t int_value = 0;
    double float_value = 0.0;
    int line = 1;
    int col = 1;
};

const char* tok_kind_name(TokKind k);

}  // namespace bsnap::minilang
