#pragma once

#include "leakcheck/ifa.hpp"
#include "leakcheck/seq.hpp"

namespace leakcheck {

// Maximal path segment ending at a clocked signal; the final block may end
// combinationally (no terminator).
struct SequentialBlock {
    std::vector<int> edges; // EdgeGraph indices, contiguous slice of the path
    int terminator = -1;    // clocked signal id, -1 only for the final block
};

std::vector<SequentialBlock> split_blocks(const EdgeGraph &graph, const LeakagePath &path);

// Disjunction of all activation conditions under which `from` flows to `to`
// through this edge's target; unconditional edges yield constant true.
Expr active_condition(const EdgeGraph &graph, int edge_index);

// Condition under which the clocked signal keeps its value this cycle: the
// negation of the disjunction of its write conditions. For memory words the
// write must also hit the tracked address to overwrite it.
Expr alive_condition(const FlatNetlist &net, int signal, Expr tracked_addr = nullptr);

// Composes the cover sequence: per block the conditional edges' activation
// conditions fused same-cycle, non-final blocks followed by the terminator's
// alive-condition under [*], blocks joined by concatenation. Memory-ended
// blocks introduce one rigid frozen-address variable each.
Seq build_sequence(const FlatNetlist &net, const EdgeGraph &graph,
                   const std::vector<SequentialBlock> &blocks);

// Full per-path property.
Property path_cover_property(const FlatNetlist &net, const EdgeGraph &graph,
                             const LeakagePath &path);

} // namespace leakcheck
