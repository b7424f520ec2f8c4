#pragma once

#include <string>

#include "leakcheck/ast.hpp"

namespace leakcheck {

// Parses one source buffer holding one or more module definitions.
// Throws InputError with position info on syntax errors and on
// recognized-but-unsupported constructs.
ModuleTree parse_rtl(const std::string &text);

// Parses and merges several buffers (e.g. one per file).
ModuleTree parse_rtl_files(const std::vector<std::pair<std::string, std::string>> &name_text);

} // namespace leakcheck
