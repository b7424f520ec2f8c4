#include "leakcheck/ts.hpp"

#include <cassert>
#include <functional>

namespace leakcheck {

namespace {

int clog2(int n) {
    int bits = 0;
    while ((1 << bits) < n)
        bits++;
    return bits;
}

// Substitutes a constant for every reference to one signal.
Expr subst_signal_const(const Expr &e, int signal, uint64_t value) {
    std::function<Expr(const Expr &)> rec = [&](const Expr &n) -> Expr {
        if (n->op == ExprOp::Signal && n->signal == signal)
            return e_const(value >> n->lo, n->width);
        if (n->args.empty())
            return n;
        bool changed = false;
        std::vector<Expr> args;
        args.reserve(n->args.size());
        for (const auto &a : n->args) {
            Expr r = rec(a);
            changed |= r.get() != a.get();
            args.push_back(std::move(r));
        }
        if (!changed)
            return n;
        ExprNode copy = *n;
        copy.args = std::move(args);
        return std::make_shared<const ExprNode>(std::move(copy));
    };
    return rec(e);
}

} // namespace

int TransitionSystem::state_bit_count() const {
    int bits = 0;
    for (const auto &s : states)
        bits += static_cast<int>(s.cur.size());
    return bits;
}

int TransitionSystem::find_state(const std::string &name) const {
    for (size_t i = 0; i < states.size(); i++)
        if (states[i].name == name)
            return static_cast<int>(i);
    return -1;
}

int TransitionSystem::add_rigid_aux(const std::string &name, int width) {
    auto it = aux_index_.find(name);
    if (it != aux_index_.end()) {
        if (static_cast<int>(states[it->second].cur.size()) != width)
            throw InputError("auxiliary variable '" + name + "' redefined with another width");
        return it->second;
    }
    StateVar sv;
    sv.name = name;
    sv.rigid = true;
    for (int i = 0; i < width; i++) {
        AigLit in = aig.new_input();
        leaves[aig_node(in)] = {LeafKind::StateBit, static_cast<int>(states.size()), i};
        sv.cur.push_back(in);
    }
    sv.next = sv.cur; // constant over the trace
    sv.init.assign(width, -1);
    int idx = static_cast<int>(states.size());
    states.push_back(std::move(sv));
    aux_index_[name] = idx;
    return idx;
}

BitVec TransitionSystem::blast(const Expr &e) {
    switch (e->op) {
    case ExprOp::Const: {
        return bv_const(e->value, e->width);
    }
    case ExprOp::Signal: {
        const BitVec &bits = signal_bits_.at(e->signal);
        if (bits.empty())
            throw InputError("signal '" + net->signal(e->signal).name +
                             "' has no blasted value (memory used without index?)");
        BitVec out;
        for (int i = e->lo; i <= e->hi; i++)
            out.push_back(bits.at(i));
        return out;
    }
    case ExprOp::Aux: {
        auto it = aux_index_.find(e->aux);
        if (it == aux_index_.end())
            throw InputError("auxiliary variable '" + e->aux + "' not registered");
        BitVec bits = states[it->second].cur;
        bits = bv_zext(bits, e->width);
        bits.resize(e->width);
        return bits;
    }
    case ExprOp::MemRead: {
        auto it = mem_states_.find(e->signal);
        if (it == mem_states_.end())
            throw InputError("memory '" + net->signal(e->signal).name + "' not in state space");
        BitVec addr = blast(e->args[0]);
        BitVec out = bv_const(0, e->width);
        for (size_t w = 0; w < it->second.size(); w++) {
            AigLit match = bv_eq(aig, addr, bv_const(w, static_cast<int>(addr.size())));
            out = bv_mux(aig, match, states[it->second[w]].cur, out);
        }
        return out;
    }
    case ExprOp::Not:
        return bv_not(aig, blast(e->args[0]));
    case ExprOp::LogNot:
        return {aig_not(bv_reduce_or(aig, blast(e->args[0])))};
    case ExprOp::RedOr:
        return {bv_reduce_or(aig, blast(e->args[0]))};
    case ExprOp::Mux: {
        AigLit sel = blast_bool(e->args[0]);
        BitVec t = bv_zext(blast(e->args[1]), e->width);
        BitVec f = bv_zext(blast(e->args[2]), e->width);
        return bv_mux(aig, sel, t, f);
    }
    case ExprOp::Concat: {
        BitVec out;
        for (auto it2 = e->args.rbegin(); it2 != e->args.rend(); ++it2) {
            BitVec part = blast(*it2);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    case ExprOp::Repl: {
        BitVec part = blast(e->args[0]);
        BitVec out;
        for (int i = 0; i < e->repl_count; i++)
            out.insert(out.end(), part.begin(), part.end());
        return out;
    }
    default:
        break;
    }
    BitVec a = blast(e->args[0]);
    BitVec b = blast(e->args[1]);
    int w = std::max(a.size(), b.size());
    switch (e->op) {
    case ExprOp::And:
        return bv_and(aig, bv_zext(a, w), bv_zext(b, w));
    case ExprOp::Or:
        return bv_or(aig, bv_zext(a, w), bv_zext(b, w));
    case ExprOp::Xor:
        return bv_xor(aig, bv_zext(a, w), bv_zext(b, w));
    case ExprOp::LogAnd:
        return {aig.mk_and(bv_reduce_or(aig, a), bv_reduce_or(aig, b))};
    case ExprOp::LogOr:
        return {aig.mk_or(bv_reduce_or(aig, a), bv_reduce_or(aig, b))};
    case ExprOp::Eq:
        return {bv_eq(aig, bv_zext(a, w), bv_zext(b, w))};
    case ExprOp::Ne:
        return {aig_not(bv_eq(aig, bv_zext(a, w), bv_zext(b, w)))};
    case ExprOp::Ult:
        return {bv_ult(aig, bv_zext(a, w), bv_zext(b, w))};
    case ExprOp::Ule:
        return {bv_ule(aig, bv_zext(a, w), bv_zext(b, w))};
    case ExprOp::Ugt:
        return {bv_ult(aig, bv_zext(b, w), bv_zext(a, w))};
    case ExprOp::Uge:
        return {bv_ule(aig, bv_zext(b, w), bv_zext(a, w))};
    case ExprOp::Add:
        return bv_add(aig, bv_zext(a, w), bv_zext(b, w));
    case ExprOp::Sub:
        return bv_sub(aig, bv_zext(a, w), bv_zext(b, w));
    case ExprOp::Shl:
        return bv_shl(aig, a, b);
    case ExprOp::Shr:
        return bv_shr(aig, a, b, false);
    case ExprOp::Sar:
        return bv_shr(aig, a, b, true);
    default:
        throw InputError("unhandled expression in bit blasting");
    }
}

AigLit TransitionSystem::blast_bool(const Expr &e) {
    BitVec bits = blast(e);
    if (bits.size() != 1)
        throw InputError("expected a 1-bit condition");
    return bits[0];
}

TransitionSystem compile_ts(const FlatNetlist &net, const TsOptions &opts) {
    TransitionSystem ts;
    ts.net = &net;
    ts.signal_bits_.resize(net.signals.size());

    // State variables: registers and memory words.
    for (const auto &sig : net.signals) {
        if (sig.kind == SignalKind::Register) {
            TransitionSystem::StateVar sv;
            sv.name = sig.name;
            sv.signal = sig.id;
            for (int i = 0; i < sig.width; i++) {
                AigLit in = ts.aig.new_input();
                ts.leaves[aig_node(in)] = {TransitionSystem::LeafKind::StateBit,
                                           static_cast<int>(ts.states.size()), i};
                sv.cur.push_back(in);
            }
            sv.init.assign(sig.width, -1);
            ts.signal_bits_[sig.id] = sv.cur;
            ts.states.push_back(std::move(sv));
        } else if (sig.kind == SignalKind::Memory) {
            if (sig.depth > 256)
                throw InputError("memory '" + sig.name + "' too deep for bit-level modeling");
            std::vector<int> word_states;
            for (int w = 0; w < sig.depth; w++) {
                TransitionSystem::StateVar sv;
                sv.name = sig.name + "[" + std::to_string(w) + "]";
                sv.signal = sig.id;
                sv.word = w;
                for (int i = 0; i < sig.width; i++) {
                    AigLit in = ts.aig.new_input();
                    ts.leaves[aig_node(in)] = {TransitionSystem::LeafKind::StateBit,
                                               static_cast<int>(ts.states.size()), i};
                    sv.cur.push_back(in);
                }
                sv.init.assign(sig.width, -1);
                word_states.push_back(static_cast<int>(ts.states.size()));
                ts.states.push_back(std::move(sv));
            }
            ts.mem_states_[sig.id] = word_states;
        }
    }

    // Input ports: free unless clock, reset or bound.
    std::unordered_map<int, Expr> bindings;
    for (const auto &b : opts.input_bindings) {
        std::vector<int> refs;
        collect_signals(b.func, refs);
        for (int r : refs)
            if (!net.signal(r).is_clocked())
                throw InputError("input binding for '" + net.signal(b.signal).name +
                                 "' may only reference registers or memories");
        bindings[b.signal] = b.func;
    }
    for (const auto &sig : net.signals) {
        if (sig.kind != SignalKind::InputPort)
            continue;
        if (sig.id == net.clock) {
            ts.signal_bits_[sig.id] = bv_const(0, sig.width);
            continue;
        }
        if (net.reset && sig.id == *net.reset) {
            ts.signal_bits_[sig.id] = bv_const(net.reset_active_high ? 0 : 1, sig.width);
            continue;
        }
        auto bound = bindings.find(sig.id);
        if (bound != bindings.end()) {
            BitVec bits = ts.blast(bound->second);
            bits = bv_zext(bits, sig.width);
            bits.resize(sig.width);
            ts.signal_bits_[sig.id] = bits;
            continue;
        }
        TransitionSystem::InputVar iv;
        iv.signal = sig.id;
        for (int i = 0; i < sig.width; i++) {
            AigLit in = ts.aig.new_input();
            ts.leaves[aig_node(in)] = {TransitionSystem::LeafKind::FreeInput,
                                       static_cast<int>(ts.free_inputs.size()), i};
            iv.bits.push_back(in);
        }
        ts.signal_bits_[sig.id] = iv.bits;
        ts.free_inputs.push_back(std::move(iv));
    }

    // Combinational logic in dependency order.
    for (const auto &sig : net.signals)
        if ((sig.kind == SignalKind::Wire || sig.kind == SignalKind::OutputPort) &&
            ts.signal_bits_[sig.id].empty())
            ts.signal_bits_[sig.id] = bv_const(0, sig.width);
    for (int aid : net.comb_topo_order()) {
        const Assignment &a = net.assignments[aid];
        BitVec src = ts.blast(a.source);
        int width = a.target.hi - a.target.lo + 1;
        src = bv_zext(src, width);
        src.resize(width);
        BitVec &dest = ts.signal_bits_[a.target.signal];
        for (int i = 0; i < width; i++)
            dest[a.target.lo + i] = src[i];
    }

    // Register updates.
    for (auto &sv : ts.states) {
        if (sv.signal < 0 || sv.word >= 0)
            continue;
        if (net.signal(sv.signal).kind != SignalKind::Register)
            continue;
        sv.next = sv.cur;
        for (const auto &a : net.assignments) {
            if (a.timing != Timing::Clocked || a.target.signal != sv.signal || a.target.mem_addr)
                continue;
            AigLit cond = ts.blast_bool(a.condition);
            int width = a.target.hi - a.target.lo + 1;
            BitVec src = ts.blast(a.source);
            src = bv_zext(src, width);
            src.resize(width);
            for (int i = 0; i < width; i++)
                sv.next[a.target.lo + i] =
                    ts.aig.mk_mux(cond, src[i], sv.next[a.target.lo + i]);
        }
    }

    // Memory word updates.
    for (const auto &[mem_sig, word_states] : ts.mem_states_) {
        const SignalDecl &decl = net.signal(mem_sig);
        for (size_t w = 0; w < word_states.size(); w++) {
            auto &sv = ts.states[word_states[w]];
            sv.next = sv.cur;
        }
        for (const auto &a : net.assignments) {
            if (a.timing != Timing::Clocked || a.target.signal != mem_sig || !a.target.mem_addr)
                continue;
            AigLit cond = ts.blast_bool(a.condition);
            BitVec addr = ts.blast(a.target.mem_addr);
            BitVec src = ts.blast(a.source);
            src = bv_zext(src, decl.width);
            src.resize(decl.width);
            for (size_t w = 0; w < word_states.size(); w++) {
                AigLit match = ts.aig.mk_and(
                    cond, bv_eq(ts.aig, addr, bv_const(w, static_cast<int>(addr.size()))));
                auto &sv = ts.states[word_states[w]];
                sv.next = bv_mux(ts.aig, match, src, sv.next);
            }
        }
    }

    // Initial values from synchronous reset behavior.
    if (net.reset) {
        uint64_t active = net.reset_active_high ? 1 : 0;
        for (auto &sv : ts.states) {
            if (sv.signal < 0 || sv.word >= 0 ||
                net.signal(sv.signal).kind != SignalKind::Register)
                continue;
            for (const auto &a : net.assignments) {
                if (a.timing != Timing::Clocked || a.target.signal != sv.signal ||
                    a.target.mem_addr)
                    continue;
                Expr cond = fold_expr(subst_signal_const(a.condition, *net.reset, active));
                if (is_const_true(cond)) {
                    Expr src = fold_expr(subst_signal_const(a.source, *net.reset, active));
                    for (int i = a.target.lo; i <= a.target.hi; i++) {
                        if (src->op == ExprOp::Const)
                            sv.init[i] = static_cast<int>((src->value >> (i - a.target.lo)) & 1);
                        else
                            sv.init[i] = -1;
                    }
                } else if (!is_const_false(cond)) {
                    for (int i = a.target.lo; i <= a.target.hi; i++)
                        sv.init[i] = -1;
                }
            }
        }
    }

    // Auxiliary call-stack fragment.
    if (opts.stack) {
        const StackMonitorSpec &spec = *opts.stack;
        int sp_bits = clog2(spec.depth + 1);
        AigLit push = ts.blast_bool(spec.push_cond);
        AigLit pop = ts.blast_bool(spec.pop_cond);
        BitVec push_val = ts.blast(spec.push_value);
        push_val = bv_zext(push_val, spec.width);
        push_val.resize(spec.width);
        BitVec pop_exp = ts.blast(spec.pop_expected);
        pop_exp = bv_zext(pop_exp, spec.width);
        pop_exp.resize(spec.width);

        auto add_state = [&](const std::string &name, int width, int init_val) {
            TransitionSystem::StateVar sv;
            sv.name = name;
            for (int i = 0; i < width; i++) {
                AigLit in = ts.aig.new_input();
                ts.leaves[aig_node(in)] = {TransitionSystem::LeafKind::StateBit,
                                           static_cast<int>(ts.states.size()), i};
                sv.cur.push_back(in);
            }
            if (init_val < 0)
                sv.init.assign(width, -1);
            else
                for (int i = 0; i < width; i++)
                    sv.init.push_back((init_val >> i) & 1);
            ts.states.push_back(std::move(sv));
            return static_cast<int>(ts.states.size()) - 1;
        };

        int sp_idx = add_state(spec.name + ".sp", sp_bits, 0);
        std::vector<int> entry_idx;
        for (int i = 0; i < spec.depth; i++)
            entry_idx.push_back(add_state(spec.name + ".entry" + std::to_string(i), spec.width,
                                          -1));
        int ovf_idx = add_state(spec.name + ".overflow", 1, 0);
        ts.stack_overflow_state = ovf_idx;

        Aig &g = ts.aig;
        const BitVec &sp = ts.states[sp_idx].cur;
        AigLit full = bv_eq(g, sp, bv_const(spec.depth, sp_bits));
        AigLit empty = bv_eq(g, sp, bv_const(0, sp_bits));
        BitVec sp_inc = bv_add(g, sp, bv_const(1, sp_bits));
        BitVec sp_dec = bv_sub(g, sp, bv_const(1, sp_bits));
        BitVec sp_next = bv_mux(g, g.mk_and(push, aig_not(full)), sp_inc,
                                bv_mux(g, g.mk_and(pop, aig_not(empty)), sp_dec, sp));
        ts.states[sp_idx].next = sp_next;

        for (int i = 0; i < spec.depth; i++) {
            AigLit here = g.mk_and(push, bv_eq(g, sp, bv_const(i, sp_bits)));
            ts.states[entry_idx[i]].next = bv_mux(g, here, push_val,
                                                  ts.states[entry_idx[i]].cur);
        }
        ts.states[ovf_idx].next = {g.mk_or(ts.states[ovf_idx].cur[0], g.mk_and(push, full))};

        // Return targets must match the top of stack.
        BitVec top = bv_const(0, spec.width);
        for (int i = 0; i < spec.depth; i++) {
            AigLit at = bv_eq(g, sp, bv_const(i + 1, sp_bits));
            top = bv_mux(g, at, ts.states[entry_idx[i]].cur, top);
        }
        AigLit match = bv_eq(g, top, pop_exp);
        ts.constraints.push_back(g.mk_implies(pop, g.mk_and(aig_not(empty), match)));
    }

    for (const Expr &c : opts.constraints)
        ts.constraints.push_back(ts.blast_bool(c));

    return ts;
}

} // namespace leakcheck
