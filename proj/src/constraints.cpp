#include "leakcheck/constraints.hpp"

#include <sstream>

#include "leakcheck/isa.hpp"
#include "leakcheck/psl.hpp"

namespace leakcheck {

Mode mode_from_string(const std::string &s) {
    if (s == "none") return Mode::None;
    if (s == "legal") return Mode::Legal;
    if (s == "used") return Mode::Used;
    if (s == "jumps") return Mode::Jumps;
    if (s == "stack") return Mode::Stack;
    if (s == "full") return Mode::Full;
    throw InputError("unknown verification mode '" + s + "'");
}

const char *mode_name(Mode m) {
    switch (m) {
    case Mode::None: return "none";
    case Mode::Legal: return "legal";
    case Mode::Used: return "used";
    case Mode::Jumps: return "jumps";
    case Mode::Stack: return "stack";
    case Mode::Full: return "full";
    }
    return "?";
}

namespace {

Expr signal_expr(const FlatNetlist &net, const std::string &name) {
    int id = net.require_signal(name);
    return e_signal(id, net.signal(id).width - 1, 0);
}

Property assume_prop(std::string name, Expr cond) {
    Property p;
    p.kind = PropKind::Assume;
    p.body = s_repinf(s_atom(std::move(cond)));
    p.name = std::move(name);
    p.origin = p.name;
    return p;
}

Expr implies(Expr a, Expr b) { return b_or(b_not(std::move(a)), std::move(b)); }

} // namespace

Property gen_legal(const FlatNetlist &net, const CoreBinding &core) {
    Expr instr = signal_expr(net, core.instr_data);
    return assume_prop("assume_legal", legal_instruction_expr(instr));
}

Property gen_used(const FlatNetlist &net, const CoreBinding &core,
                  const ProgramImage &program) {
    if (program.words.empty())
        throw InputError("cannot derive used-instruction assumptions from an empty program");
    Expr instr = signal_expr(net, core.instr_data);
    Expr in_set = e_false();
    for (uint32_t enc : program.distinct_encodings())
        in_set = b_or(in_set, e_binop(ExprOp::Eq, instr, e_const(enc, 32)));
    return assume_prop("assume_used", in_set);
}

TsOptions::InputBinding gen_memory_table(const FlatNetlist &net, const CoreBinding &core,
                                         const ProgramImage &program) {
    for (const auto &port : core.instr_write_ports)
        if (net.find_signal(port) >= 0)
            throw InputError("design exposes a program-memory write port ('" + port +
                             "'); the lookup table would be unsound under self-modification");
    Expr addr = signal_expr(net, core.fetch_addr);
    // Address gaps hold the all-zeros word, which decodes as illegal and is
    // unreachable once the legality assumption is active.
    Expr table = e_const(0, 32);
    for (const auto &[a, w] : program.words)
        table = e_mux(e_binop(ExprOp::Eq, addr, e_const(a, addr->width)), e_const(w, 32), table);
    TsOptions::InputBinding binding;
    binding.signal = net.require_signal(core.instr_data);
    binding.func = table;
    return binding;
}

std::vector<Property> gen_jump_constraints(const FlatNetlist &net, const CoreBinding &core,
                                           const ProgramImage &program) {
    if (!program.has_metadata)
        throw InputError("mode jumps requires program metadata (call sites, hardware loops)");
    std::vector<Property> out;

    Expr ret = cond_true(signal_expr(net, core.ret_exec));
    Expr target = signal_expr(net, core.ret_target);
    Expr targets_ok = e_false();
    for (const auto &cs : program.call_sites)
        targets_ok = b_or(targets_ok,
                          e_binop(ExprOp::Eq, target, e_const(cs.return_addr, target->width)));
    out.push_back(assume_prop("assume_ret_targets", implies(ret, targets_ok)));

    Expr active = cond_true(signal_expr(net, core.lp_active));
    Expr start = signal_expr(net, core.lp_start);
    Expr end = signal_expr(net, core.lp_end);
    Expr loops_ok = e_false();
    for (const auto &hl : program.hwloops)
        loops_ok = b_or(loops_ok, b_and(e_binop(ExprOp::Eq, start, e_const(hl.start, start->width)),
                                        e_binop(ExprOp::Eq, end, e_const(hl.end, end->width))));
    out.push_back(assume_prop("assume_hwloop_targets", implies(active, loops_ok)));
    return out;
}

StackMonitorSpec gen_call_stack(const FlatNetlist &net, const CoreBinding &core,
                                const ProgramImage &program, int depth) {
    int need = program.static_call_depth();
    if (depth < need)
        throw InputError("call-stack depth " + std::to_string(depth) +
                         " is below the program's static call depth " + std::to_string(need));
    StackMonitorSpec spec;
    spec.depth = depth;
    spec.width = net.signal(net.require_signal(core.link_value)).width;
    spec.push_cond = cond_true(signal_expr(net, core.call_exec));
    spec.push_value = signal_expr(net, core.link_value);
    spec.pop_cond = cond_true(signal_expr(net, core.ret_exec));
    spec.pop_expected = signal_expr(net, core.ret_target);
    return spec;
}

AssumptionSet gen_assumptions(const FlatNetlist &net, const CoreBinding &core, Mode mode,
                              const ProgramImage *program, int stack_depth) {
    if (mode == Mode::Full)
        throw InputError("mode full is an escalation schedule, not an assumption set");
    AssumptionSet set;
    set.mode = mode;
    auto need_program = [&]() -> const ProgramImage & {
        if (!program)
            throw InputError(std::string("mode ") + mode_name(mode) + " requires a program image");
        return *program;
    };

    if (mode == Mode::Legal || mode == Mode::Used || mode == Mode::Jumps || mode == Mode::Stack)
        set.assumes.push_back(gen_legal(net, core));
    if (mode == Mode::Used || mode == Mode::Jumps || mode == Mode::Stack)
        set.assumes.push_back(gen_used(net, core, need_program()));
    if (mode == Mode::Jumps || mode == Mode::Stack) {
        set.ts.input_bindings.push_back(gen_memory_table(net, core, need_program()));
        set.has_memory_table = true;
        for (auto &p : gen_jump_constraints(net, core, need_program()))
            set.assumes.push_back(std::move(p));
    }
    if (mode == Mode::Stack) {
        set.ts.stack = gen_call_stack(net, core, need_program(), stack_depth);
        set.stack_depth = stack_depth;
    }

    for (const auto &p : set.assumes) {
        // assume bodies are (condition)[*]: the condition holds every cycle
        set.ts.constraints.push_back(p.body->a->atom);
    }
    return set;
}

std::string AssumptionSet::psl_dump(const FlatNetlist &net, const std::string &clock) const {
    std::ostringstream os;
    os << "// verification mode: " << mode_name(mode) << "\n";
    for (const auto &p : assumes) {
        os << "// " << p.name << "\n";
        os << emit_psl(p, net, clock);
    }
    if (has_memory_table)
        os << "// program memory bound to the loaded image (fetch-address lookup table)\n";
    if (stack_depth > 0)
        os << "// call-return matching enforced by the call-stack monitor, depth "
           << stack_depth << "\n";
    return os.str();
}

} // namespace leakcheck
