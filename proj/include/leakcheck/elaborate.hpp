#pragma once

#include <string>
#include <vector>

#include "leakcheck/ast.hpp"
#include "leakcheck/netlist.hpp"

namespace leakcheck {

struct ElabOptions {
    std::string top;        // empty = infer (unique non-instantiated module)
    std::string reset_name; // flat name of the reset input, optional
    bool reset_active_high = true;
    std::vector<std::string> unused_outputs; // top outputs allowed to dangle
};

// Inlines the hierarchy into a FlatNetlist: instance-path-prefixed names,
// if/case nests flattened into per-assignment condition conjunctions,
// single-clock and combinational-cycle checks applied.
FlatNetlist elaborate(const ModuleTree &tree, const ElabOptions &opts = {});

} // namespace leakcheck
