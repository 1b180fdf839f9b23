#pragma once

#include <string>
#include <vector>

#include "minilang/token.hpp"

namespace bsnap::minilang {

// Turns UTF-8 source text into a token stream ending with an Eof token.
// Comments (`//` to end of line) and whitespace are discarded.
// Throws LexError on characters outside the language alphabet.
std::vector<Token> tokenize(const std::string& source);

}  // namespace bsnap::minilang
