#pragma once

#include <optional>

#include "leakcheck/netlist.hpp"
#include "leakcheck/program.hpp"
#include "leakcheck/seq.hpp"
#include "leakcheck/ts.hpp"

namespace leakcheck {

// Core signals the software constraints attach to, by hierarchical name.
struct CoreBinding {
    std::string instr_data;  // program-memory read port (input port)
    std::string fetch_addr;  // fetch address register (drives the instr port)
    std::string ret_exec;    // 1-bit: a return instruction executes
    std::string ret_target;  // return target value
    std::string call_exec;   // 1-bit: a call executes
    std::string link_value;  // return address a call saves
    std::string lp_active;   // 1-bit: hardware loop armed
    std::string lp_start;    // hardware loop start register
    std::string lp_end;      // hardware loop end register
    std::vector<std::string> instr_write_ports; // outputs that could patch
                                                // program memory, if any
};

enum class Mode { None, Legal, Used, Jumps, Stack, Full };

Mode mode_from_string(const std::string &s);
const char *mode_name(Mode m);

// Assumption bundle for one verification mode: audit-ready assume
// properties plus the checker options (constraints, program-memory lookup
// binding, call-stack fragment) they compile into.
struct AssumptionSet {
    Mode mode = Mode::None;
    std::vector<Property> assumes;
    TsOptions ts;
    bool has_memory_table = false;
    int stack_depth = 0;

    std::string psl_dump(const FlatNetlist &net, const std::string &clock) const;
};

// Individual assumptions (exposed for tests); gen_assumptions composes them.
Property gen_legal(const FlatNetlist &net, const CoreBinding &core);
Property gen_used(const FlatNetlist &net, const CoreBinding &core, const ProgramImage &program);
TsOptions::InputBinding gen_memory_table(const FlatNetlist &net, const CoreBinding &core,
                                         const ProgramImage &program);
std::vector<Property> gen_jump_constraints(const FlatNetlist &net, const CoreBinding &core,
                                           const ProgramImage &program);
StackMonitorSpec gen_call_stack(const FlatNetlist &net, const CoreBinding &core,
                                const ProgramImage &program, int depth);

AssumptionSet gen_assumptions(const FlatNetlist &net, const CoreBinding &core, Mode mode,
                              const ProgramImage *program, int stack_depth = 8);

} // namespace leakcheck
