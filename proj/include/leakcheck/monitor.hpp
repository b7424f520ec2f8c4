#pragma once

#include <functional>
#include <vector>

#include "leakcheck/seq.hpp"

namespace leakcheck {

// Nondeterministic finite automaton over finite trace prefixes; every edge
// consumes one cycle and is guarded by a Boolean condition over netlist
// signals (plus auxiliary variables). Accepts exactly the traces matching
// the TemporalSeq it was compiled from.
struct Monitor {
    struct Edge {
        int from = 0;
        int to = 0;
        Expr guard;
    };

    int num_states = 0;
    int start = 0;
    std::vector<Edge> edges;
    std::vector<bool> accepting;

    bool accepts_empty() const { return accepting[start]; }
};

// SERE -> NFA; state count is linear in the AST size.
Monitor compile_monitor(const Seq &seq);

// Evaluates one atom on one trace cycle.
using AtomEval = std::function<bool(const Expr &, int cycle)>;

// Recursive trace-matching oracle: does seq match cycles [i..j] (inclusive,
// empty when j < i)?
bool seq_matches(const Seq &seq, const AtomEval &eval, int i, int j);

// Runs the NFA over cycles [0..len-1]; returns true if some run beginning
// at cycle 0 accepts exactly at the end.
bool monitor_accepts(const Monitor &m, const AtomEval &eval, int len);

} // namespace leakcheck
