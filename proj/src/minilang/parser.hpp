#pragma once

#include <string>

#include "minilang/ast.hpp"

namespace bsnap::minilang {

// Parses one source file into a Module. `export` is only accepted in library
// modules and `test` blocks only in test modules; violations are ParseErrors.
ModulePtr parse_module(const std::string& source, const std::string& name,
                       ModuleKind kind);

}  // namespace bsnap::minilang
