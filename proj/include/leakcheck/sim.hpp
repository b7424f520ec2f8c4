#pragma once

#include <unordered_map>
#include <vector>

#include "leakcheck/netlist.hpp"

namespace leakcheck {

// Cycle-accurate word-level interpreter for a FlatNetlist. Serves as the
// reference simulator for witness replay, taint tracking and the
// flattening-equivalence checks.
class NetSim : public EvalEnv {
public:
    explicit NetSim(const FlatNetlist &net);

    const FlatNetlist &netlist() const { return net_; }

    void fill_state(uint64_t pattern); // registers and memories
    void set_value(int signal, uint64_t v);
    void set_mem(int signal, uint64_t addr, uint64_t v);
    void set_aux(const std::string &name, uint64_t v);

    // Settles combinational logic from current inputs/state.
    void eval_comb();
    // Commits clocked updates (reads settled values); callers then set new
    // inputs and eval_comb() again.
    void clock_edge();

    uint64_t value(int signal) const { return values_[signal]; }
    uint64_t mem(int signal, uint64_t addr) const;

    uint64_t signal_value(int signal) const override { return values_[signal]; }
    uint64_t mem_word(int signal, uint64_t addr) const override { return mem(signal, addr); }
    uint64_t aux_value(const std::string &name) const override;

private:
    const FlatNetlist &net_;
    std::vector<int> comb_order_;
    std::vector<uint64_t> values_;
    std::vector<std::vector<uint64_t>> mems_;
    std::unordered_map<std::string, uint64_t> aux_;
};

} // namespace leakcheck
