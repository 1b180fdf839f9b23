#pragma once

#include <string>

namespace bsnap::minilang {

// Builtins are not shadowable by declarations.
bool is_builtin(const std::string& name);

}  // namespace bsnap::minilang
