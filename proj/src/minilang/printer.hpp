#pragma once

#include <string>

#include "minilang/ast.hpp"

namespace bsnap::minilang {

// Renders a module (or a single declaration) back to parseable source.
// parse(pretty_print(parse(s))) is structurally equal to parse(s).
std::string pretty_print(const Module& mod);
std::string pretty_print_function(const FunctionDecl& fn, int indent = 0);
std::string pretty_print_class(const ClassDecl& cls);

// Structural equality of parsed modules, ignoring source positions.
bool structurally_equal(const Module& a, const Module& b);

}  // namespace bsnap::minilang
