#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "leakcheck/expr.hpp"

namespace leakcheck {

enum class SignalKind { InputPort, OutputPort, Wire, Register, Memory };

struct SignalDecl {
    int id = -1;
    std::string name; // hierarchical, '.'-separated
    int width = 1;
    SignalKind kind = SignalKind::Wire;
    int depth = 1; // word count, memories only
    SourceLoc loc;

    bool is_clocked() const { return kind == SignalKind::Register || kind == SignalKind::Memory; }
};

struct LValue {
    int signal = -1;
    int hi = 0, lo = 0; // bit slice of the (word) width
    Expr mem_addr;      // non-null for memory word targets
};

enum class Timing { Combinational, Clocked };

struct Assignment {
    int id = -1;
    LValue target;
    Expr source;
    Expr condition; // 1-bit; constant true means unconditional
    Timing timing = Timing::Combinational;
    int order_index = 0; // source-text position, also write priority within a cycle
    SourceLoc loc;
};

// Pair of flattened guard conditions that came from the two sides of one
// if/else (or from distinct case arms); must be mutually unsatisfiable.
struct SiblingConditions {
    Expr first;
    Expr second;
    SourceLoc loc;
};

struct FlatNetlist : SymbolScope {
    std::vector<SignalDecl> signals;
    std::vector<Assignment> assignments;
    int clock = -1; // -1 when the design is purely combinational
    std::optional<int> reset;
    bool reset_active_high = true;

    std::vector<SiblingConditions> sibling_conditions; // kept for verification

    std::unordered_map<std::string, int> name_to_id;

    int add_signal(SignalDecl decl);
    int find_signal(const std::string &name) const; // -1 if absent
    int require_signal(const std::string &name) const;
    const SignalDecl &signal(int id) const { return signals.at(id); }

    std::string signal_name(int id) const override { return signals.at(id).name; }
    int signal_width(int id) const override { return signals.at(id).width; }

    // Assignments driving each signal, in priority order.
    std::vector<std::vector<int>> writers_by_signal() const;

    // Topological order of combinational assignments; throws InputError with
    // the offending signal cycle if one exists.
    std::vector<int> comb_topo_order() const;

    // Structural well-formedness: declared widths, slice bounds, memory
    // usage, clocked-target kinds. Throws on violation.
    void validate() const;

    int total_state_bits() const; // registers + memory words
};

} // namespace leakcheck
