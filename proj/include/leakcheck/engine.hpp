#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "leakcheck/monitor.hpp"
#include "leakcheck/sat.hpp"
#include "leakcheck/ts.hpp"

namespace leakcheck {

enum class VerdictKind { Covered, Uncoverable, Unknown };
enum class ProofMethod { Bmc, KInduction, ExplicitState, Structural };

// Concrete trace demonstrating a covered property: free-input values per
// cycle plus the initial values of unconstrained state bits and the rigid
// auxiliary (frozen) variables.
struct Witness {
    int length = 0;                                        // cycles
    std::vector<std::unordered_map<int, uint64_t>> inputs; // [cycle][signal id]
    std::unordered_map<std::string, uint64_t> initial_state; // state name -> value
    std::unordered_map<std::string, uint64_t> aux;           // frozen variables
    bool stack_overflow = false; // witness relies on monitor-stack overflow
};

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    ProofMethod method = ProofMethod::Bmc;
    int bound = 0; // BMC depth reached / induction depth / state count log
    Witness witness;
    std::string detail;
};

struct EngineLimits {
    int max_k = 20;
    int induction_max_depth = 8;
    int explicit_state_bits = 20;
    int explicit_input_bits = 14;
    int64_t conflict_budget = -1; // per SAT query
};

// Product of the bit-blasted netlist (plus assumptions) with one cover
// monitor. Owns every SAT interaction for this property.
class CoverEngine {
public:
    CoverEngine(const FlatNetlist &net, const TsOptions &opts, const Monitor &monitor);

    // Candidate invariant; kept only if it holds initially and is 1-inductive
    // under the active constraints. Returns whether it was kept.
    bool add_lemma(const Expr &candidate);

    // Self-derived strengthening: frozen-variable domains and unreachable
    // monitor states, each SAT-verified before use.
    void generate_auto_lemmas();

    Verdict bmc(int max_k, int64_t conflict_budget);
    // Sound only for depths covered by a previous bmc() run (base case).
    Verdict prove_by_induction(int max_depth, int64_t conflict_budget);
    Verdict explicit_search(int state_bit_limit, int input_bit_limit);

    uint64_t sat_queries() const { return queries_; }
    const TransitionSystem &ts() const { return ts_; }
    const Monitor &monitor() const { return monitor_; }

    // Directory for per-query DIMACS dumps (empty = disabled).
    std::string dimacs_dir;

private:
    struct Unroller;

    TransitionSystem ts_;
    Monitor monitor_;
    std::vector<int> monitor_states_; // TS state index per NFA state
    AigLit accept_ = kAigFalse;
    std::vector<AigLit> lemmas_;
    uint64_t queries_ = 0;
    int bmc_verified_k_ = -1; // no accept from init up to this frame
    int lemma_counter_ = 0;

    bool verify_lemma_lit(AigLit lemma);
    Witness extract_witness(const Unroller &u, const SatSolver &sat, int frames) const;
    void dump_query(const SatSolver &sat, const std::vector<Lit> &assumps,
                    const std::string &tag);
};

} // namespace leakcheck
