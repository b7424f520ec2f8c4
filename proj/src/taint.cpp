#include "leakcheck/taint.hpp"

namespace leakcheck {

void TaintSim::set_mem_taint(int signal, uint64_t addr, uint64_t mask) {
    auto &words = mem_taint_[signal];
    if (addr < words.size())
        words[addr] = mask_width(mask, net_.signal(signal).width);
}

uint64_t TaintSim::mem_taint(int signal, uint64_t addr) const {
    const auto &words = mem_taint_[signal];
    return addr < words.size() ? words[addr] : 0;
}

uint64_t TaintSim::expr_taint(const Expr &e) const {
    switch (e->op) {
    case ExprOp::Const:
    case ExprOp::Aux:
        return 0;
    case ExprOp::Signal:
        return mask_width(taint_[e->signal] >> e->lo, e->width);
    case ExprOp::MemRead: {
        uint64_t addr = eval_expr(e->args[0], sim_);
        return mem_taint(e->signal, addr);
    }
    case ExprOp::Not:
        return expr_taint(e->args[0]);
    case ExprOp::Mux: {
        uint64_t sel = eval_expr(e->args[0], sim_);
        return mask_width(expr_taint(sel ? e->args[1] : e->args[2]), e->width);
    }
    case ExprOp::Concat: {
        uint64_t t = 0;
        int off = e->width;
        for (const auto &part : e->args) {
            off -= part->width;
            t |= expr_taint(part) << off;
        }
        return t;
    }
    case ExprOp::Repl: {
        uint64_t part = expr_taint(e->args[0]);
        uint64_t t = 0;
        for (int i = 0; i < e->repl_count; i++)
            t = (t << e->args[0]->width) | part;
        return t;
    }
    case ExprOp::And:
    case ExprOp::Or:
    case ExprOp::Xor:
        return mask_width(expr_taint(e->args[0]) | expr_taint(e->args[1]), e->width);
    default: {
        // word operators: any tainted operand bit taints every result bit
        uint64_t any = 0;
        for (const auto &arg : e->args)
            any |= expr_taint(arg);
        return any ? mask_width(~uint64_t{0}, e->width) : 0;
    }
    }
}

void TaintSim::eval_comb() {
    // taint updates interleave with value updates in dependency order
    for (int aid : net_.comb_topo_order()) {
        const Assignment &a = net_.assignments[aid];
        uint64_t v = eval_expr(a.source, sim_);
        uint64_t t = expr_taint(a.source);
        const SignalDecl &d = net_.signal(a.target.signal);
        int lo = a.target.lo, hi = a.target.hi;
        uint64_t keep = ~(mask_width(~uint64_t{0}, hi - lo + 1) << lo);
        sim_.set_value(a.target.signal,
                       mask_width((sim_.value(a.target.signal) & keep) |
                                      (mask_width(v, hi - lo + 1) << lo),
                                  d.width));
        taint_[a.target.signal] = mask_width(
            (taint_[a.target.signal] & keep) | (mask_width(t, hi - lo + 1) << lo), d.width);
    }
}

void TaintSim::clock_edge() {
    struct RegUpdate {
        int signal;
        int hi, lo;
        uint64_t value;
        uint64_t taint;
    };
    struct MemUpdate {
        int signal;
        uint64_t addr;
        uint64_t value;
        uint64_t taint;
    };
    std::vector<RegUpdate> regs;
    std::vector<MemUpdate> mems;
    for (const auto &a : net_.assignments) {
        if (a.timing != Timing::Clocked)
            continue;
        if (eval_expr(a.condition, sim_) == 0)
            continue;
        uint64_t v = eval_expr(a.source, sim_);
        uint64_t t = expr_taint(a.source);
        if (a.target.mem_addr) {
            uint64_t addr = eval_expr(a.target.mem_addr, sim_);
            mems.push_back({a.target.signal, addr, v, t});
        } else {
            regs.push_back({a.target.signal, a.target.hi, a.target.lo, v, t});
        }
    }
    for (const auto &u : regs) {
        const SignalDecl &d = net_.signal(u.signal);
        int w = u.hi - u.lo + 1;
        uint64_t keep = ~(mask_width(~uint64_t{0}, w) << u.lo);
        sim_.set_value(u.signal, mask_width((sim_.value(u.signal) & keep) |
                                                (mask_width(u.value, w) << u.lo),
                                            d.width));
        taint_[u.signal] =
            mask_width((taint_[u.signal] & keep) | (mask_width(u.taint, w) << u.lo), d.width);
    }
    for (const auto &u : mems) {
        sim_.set_mem(u.signal, u.addr, u.value);
        auto &words = mem_taint_[u.signal];
        if (u.addr < words.size())
            words[u.addr] = mask_width(u.taint, net_.signal(u.signal).width);
    }
}

} // namespace leakcheck
