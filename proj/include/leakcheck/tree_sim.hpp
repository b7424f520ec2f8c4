#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "leakcheck/ast.hpp"

namespace leakcheck {

// Reference interpreter that executes the module tree directly, without
// flattening: per-instance value maps, operational if/case execution and
// relaxation-based combinational settling. Used to cross-check elaboration.
class TreeSim {
public:
    TreeSim(const ModuleTree &tree, const std::string &top = "");
    ~TreeSim();

    void set_input(const std::string &flat_name, uint64_t v);
    uint64_t value(const std::string &flat_name) const;

    void settle();
    void clock_edge(); // executes all always blocks, commits, settles

    // All (hierarchical name, value) pairs for ports and nets.
    std::vector<std::pair<std::string, uint64_t>> all_values() const;
    // All (hierarchical name, words) pairs for memories.
    std::vector<std::pair<std::string, std::vector<uint64_t>>> all_memories() const;

private:
    struct Inst;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace leakcheck
