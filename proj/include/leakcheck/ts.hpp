#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "leakcheck/aig.hpp"
#include "leakcheck/netlist.hpp"

namespace leakcheck {

// Auxiliary monitor fragment: a hardware call stack of fixed depth that
// pushes on calls, pops on returns, and constrains return targets to match
// the top of stack. Overflow is a sticky flag, not a constraint.
struct StackMonitorSpec {
    std::string name = "callstack";
    int depth = 8;
    int width = 32;
    Expr push_cond;
    Expr push_value;
    Expr pop_cond;
    Expr pop_expected;
};

struct TsOptions {
    // Input port defined as a function of register state (e.g. the
    // program-memory lookup table keyed by the fetch address register).
    struct InputBinding {
        int signal = -1;
        Expr func;
    };
    std::vector<InputBinding> input_bindings;
    std::vector<Expr> constraints; // 1-bit, must hold every cycle
    std::optional<StackMonitorSpec> stack;
};

// Bit-blasted single-clock transition system. State variables cover
// registers, individual memory words and auxiliary monitor state; inputs
// are free per cycle unless bound by an InputBinding.
class TransitionSystem {
public:
    struct StateVar {
        std::string name;
        int signal = -1; // netlist signal, -1 for aux state
        int word = -1;   // memory word index, -1 otherwise
        bool rigid = false;
        BitVec cur;           // AIG input literals
        BitVec next;          // update functions
        std::vector<int> init; // per bit: -1 free, 0, 1
    };
    struct InputVar {
        int signal = -1;
        BitVec bits;
    };

    Aig aig;
    std::vector<StateVar> states;
    std::vector<InputVar> free_inputs; // excludes bound/constant inputs
    std::vector<AigLit> constraints;

    // What each AIG input node stands for (for unrolling).
    enum class LeafKind { FreeInput, StateBit };
    struct LeafInfo {
        LeafKind kind = LeafKind::FreeInput;
        int index = -1; // free_inputs or states index
        int bit = 0;
    };
    std::unordered_map<uint32_t, LeafInfo> leaves; // AIG node -> role

    const FlatNetlist *net = nullptr;

    int state_bit_count() const;
    int find_state(const std::string &name) const;

    // Registers a rigid auxiliary variable (constant over a trace, free
    // initial value); returns the state index.
    int add_rigid_aux(const std::string &name, int width);

    // Blasts an expression over current-cycle signal values; aux references
    // must have been registered. 1-bit helper asserts width.
    BitVec blast(const Expr &e);
    AigLit blast_bool(const Expr &e);

    // valuation of a signal's combinational bits (for witness extraction)
    const BitVec &signal_bits(int signal) const { return signal_bits_[signal]; }

    // sticky overflow flag of the stack fragment, if present
    int stack_overflow_state = -1;

    std::vector<BitVec> signal_bits_;               // per signal
    std::unordered_map<std::string, int> aux_index_; // aux name -> state idx
    std::unordered_map<int, std::vector<int>> mem_states_; // signal -> state idx per word

private:
    friend TransitionSystem compile_ts(const FlatNetlist &net, const TsOptions &opts);
};

TransitionSystem compile_ts(const FlatNetlist &net, const TsOptions &opts);

} // namespace leakcheck
