#pragma once

#include <string>

#include "leakcheck/netlist.hpp"
#include "leakcheck/seq.hpp"

namespace leakcheck {

// Deterministic PSL text: {A} ; {B} concatenation, A : B fuse, A[*]
// repetition, wrapped in cover{...}; / assume{...}; and default-clocked on
// the given clock. Reparsing yields a structurally equal property.
std::string emit_psl(const Property &prop, const SymbolScope &scope,
                     const std::string &clock_name);

// Inverse of emit_psl up to whitespace. Unknown identifiers parse as
// auxiliary (frozen) variables; their width is inferred from comparison
// contexts and defaults to 1.
Property parse_psl(const std::string &text, const FlatNetlist &net);

} // namespace leakcheck
