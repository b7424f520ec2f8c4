#include "leakcheck/sim.hpp"

namespace leakcheck {

NetSim::NetSim(const FlatNetlist &net) : net_(net), comb_order_(net.comb_topo_order()) {
    values_.assign(net.signals.size(), 0);
    mems_.resize(net.signals.size());
    for (const auto &s : net.signals)
        if (s.kind == SignalKind::Memory)
            mems_[s.id].assign(static_cast<size_t>(s.depth), 0);
}

void NetSim::fill_state(uint64_t pattern) {
    for (const auto &s : net_.signals) {
        if (s.kind == SignalKind::Register)
            values_[s.id] = mask_width(pattern, s.width);
        else if (s.kind == SignalKind::Memory)
            for (auto &w : mems_[s.id])
                w = mask_width(pattern, s.width);
    }
}

void NetSim::set_value(int signal, uint64_t v) {
    values_[signal] = mask_width(v, net_.signal(signal).width);
}

void NetSim::set_mem(int signal, uint64_t addr, uint64_t v) {
    auto &words = mems_[signal];
    if (addr < words.size())
        words[addr] = mask_width(v, net_.signal(signal).width);
}

void NetSim::set_aux(const std::string &name, uint64_t v) { aux_[name] = v; }

uint64_t NetSim::mem(int signal, uint64_t addr) const {
    const auto &words = mems_[signal];
    return addr < words.size() ? words[addr] : 0;
}

uint64_t NetSim::aux_value(const std::string &name) const {
    auto it = aux_.find(name);
    if (it == aux_.end())
        throw InputError("auxiliary variable '" + name + "' not set in simulator");
    return it->second;
}

void NetSim::eval_comb() {
    for (int aid : comb_order_) {
        const Assignment &a = net_.assignments[aid];
        uint64_t v = eval_expr(a.source, *this);
        const SignalDecl &d = net_.signal(a.target.signal);
        int lo = a.target.lo;
        int hi = a.target.hi;
        uint64_t field = mask_width(v, hi - lo + 1);
        uint64_t keep_mask = ~(mask_width(~uint64_t{0}, hi - lo + 1) << lo);
        values_[a.target.signal] =
            mask_width((values_[a.target.signal] & keep_mask) | (field << lo), d.width);
    }
}

void NetSim::clock_edge() {
    struct RegUpdate {
        int signal;
        int hi, lo;
        uint64_t value;
    };
    struct MemUpdate {
        int signal;
        uint64_t addr;
        uint64_t value;
    };
    std::vector<RegUpdate> regs;
    std::vector<MemUpdate> mems;

    for (const auto &a : net_.assignments) {
        if (a.timing != Timing::Clocked)
            continue;
        if (eval_expr(a.condition, *this) == 0)
            continue;
        uint64_t v = eval_expr(a.source, *this);
        if (a.target.mem_addr) {
            mems.push_back({a.target.signal, eval_expr(a.target.mem_addr, *this),
                            mask_width(v, net_.signal(a.target.signal).width)});
        } else {
            regs.push_back({a.target.signal, a.target.hi, a.target.lo,
                            mask_width(v, a.target.hi - a.target.lo + 1)});
        }
    }
    for (const auto &u : regs) {
        const SignalDecl &d = net_.signal(u.signal);
        uint64_t keep_mask = ~(mask_width(~uint64_t{0}, u.hi - u.lo + 1) << u.lo);
        values_[u.signal] = mask_width((values_[u.signal] & keep_mask) | (u.value << u.lo),
                                       d.width);
    }
    for (const auto &u : mems) {
        auto &words = mems_[u.signal];
        if (u.addr < words.size())
            words[u.addr] = u.value;
    }
}

} // namespace leakcheck
