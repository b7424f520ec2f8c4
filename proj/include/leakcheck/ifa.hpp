#pragma once

#include <string>
#include <vector>

#include "leakcheck/netlist.hpp"

namespace leakcheck {

struct BitRange {
    int hi = -1, lo = -1; // -1/-1 = full declared width
    bool full() const { return hi < 0; }
};

struct LabelRef {
    std::string name;
    BitRange range;
};

struct LabelConfig {
    std::vector<LabelRef> sensitive;
    std::vector<LabelRef> sinks;
    std::vector<LabelRef> declassified; // flow through these is permitted

    // Resolves names and checks the source/sink sets are disjoint.
    void validate(const FlatNetlist &net) const;
};

// Word-level dataflow edge between two signals, with all parallel
// assignment arms merged; the condition is the OR of the arms' activation
// conditions (the active-function of the edge).
struct AssignmentEdge {
    int from = -1;
    int to = -1;
    Expr condition; // constant true = unconditional
    bool sequential = false;
    int assignment = -1; // representative (lowest contributing id)
    BitRange from_range, to_range;
    Expr read_addr;  // from-side memory word address, when from is a memory
    Expr write_addr; // to-side memory word address, when to is a memory
};

struct EdgeGraph {
    std::vector<AssignmentEdge> edges;
    std::vector<std::vector<int>> out; // per signal, edge indices sorted by to-id

    static EdgeGraph build(const FlatNetlist &net);
};

struct LeakagePath {
    std::vector<int> edges; // EdgeGraph indices, in flow order
    int source = -1;
    int sink = -1;
    BitRange source_range, sink_range;
    std::string id; // assigned after ranking, stable

    int length() const { return static_cast<int>(edges.size()); }
};

struct PathLimits {
    int max_paths = 256;
    int max_edges = 16;
};

struct PathResult {
    std::vector<LeakagePath> paths;
    bool truncated = false;
};

// All simple paths (no repeated edge) from sensitive sources to untrusted
// sinks, ranked: fewer conditional edges first, then shorter, then
// lexicographic edge ids. Deterministic for identical inputs.
PathResult enumerate_paths(const FlatNetlist &net, const EdgeGraph &graph,
                           const LabelConfig &labels, const PathLimits &limits);

// Stable order: fewer conditional edges, then shorter, then lexicographic
// edge ids; assigns the stable path ids.
void rank_paths(const EdgeGraph &graph, std::vector<LeakagePath> &paths);

int conditional_edge_count(const EdgeGraph &graph, const LeakagePath &path);

// One-record-per-path machine-readable report (JSON lines).
std::string paths_report(const FlatNetlist &net, const EdgeGraph &graph,
                         const PathResult &result);

} // namespace leakcheck
