#pragma once

#include "leakcheck/sim.hpp"

namespace leakcheck {

// Dynamic data-flow taint tracking alongside NetSim. Mux selects and memory
// addresses are control, not data: taint flows through the selected arm and
// the addressed word only. Word operators (arithmetic, shifts, comparisons)
// spread any operand taint to the whole result.
class TaintSim {
public:
    explicit TaintSim(const FlatNetlist &net) : net_(net), sim_(net) {
        taint_.assign(net.signals.size(), 0);
        mem_taint_.resize(net.signals.size());
        for (const auto &s : net.signals)
            if (s.kind == SignalKind::Memory)
                mem_taint_[s.id].assign(static_cast<size_t>(s.depth), 0);
    }

    NetSim &sim() { return sim_; }

    void set_taint(int signal, uint64_t mask) {
        taint_[signal] = mask_width(mask, net_.signal(signal).width);
    }
    void set_mem_taint(int signal, uint64_t addr, uint64_t mask);

    uint64_t taint(int signal) const { return taint_[signal]; }
    uint64_t mem_taint(int signal, uint64_t addr) const;

    // Mirror NetSim's evaluation: combinational settle, then clock commit.
    void eval_comb();
    void clock_edge();

private:
    uint64_t expr_taint(const Expr &e) const;

    const FlatNetlist &net_;
    NetSim sim_;
    std::vector<uint64_t> taint_;
    std::vector<std::vector<uint64_t>> mem_taint_;
};

} // namespace leakcheck
