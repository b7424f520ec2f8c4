#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <string>
#include <vector>

namespace leakcheck {

// Literal: 2*var for the positive phase, 2*var+1 for the negated phase.
struct Lit {
    int code = -2;

    static Lit make(int var, bool neg = false) { return Lit{2 * var + (neg ? 1 : 0)}; }
    int var() const { return code >> 1; }
    bool neg() const { return code & 1; }
    Lit operator~() const { return Lit{code ^ 1}; }
    bool operator==(const Lit &o) const { return code == o.code; }
    bool operator!=(const Lit &o) const { return code != o.code; }
};

// CDCL solver: two-watched-literal propagation, VSIDS, phase saving, Luby
// restarts, 1UIP learning with basic minimization, activity-driven learnt
// clause reduction and incremental solving under assumptions.
class SatSolver {
public:
    enum class Result { Sat, Unsat, Undef };

    SatSolver() { order_.act = &activity_; }

    int new_var();
    int num_vars() const { return static_cast<int>(assigns_.size()); }

    // Returns false if the clause makes the instance trivially unsatisfiable.
    bool add_clause(std::vector<Lit> lits);

    // conflict_budget < 0 means no limit; exhaustion yields Undef, reported
    // distinctly from Unsat.
    Result solve(const std::vector<Lit> &assumptions = {}, int64_t conflict_budget = -1);

    bool model_value(int var) const { return model_[var] == 1; }

    // Problem clauses plus the given assumptions as units, standard DIMACS.
    void dump_dimacs(std::ostream &os, const std::vector<Lit> &assumptions = {}) const;

    struct Stats {
        uint64_t solves = 0;
        uint64_t conflicts = 0;
        uint64_t propagations = 0;
        uint64_t decisions = 0;
    };
    const Stats &stats() const { return stats_; }

private:
    struct Clause {
        std::vector<Lit> lits;
        double activity = 0.0;
        bool learnt = false;
    };

    static constexpr int8_t kUndef = -1;

    std::deque<Clause> clauses_; // stable addresses
    std::vector<Clause *> problem_;
    std::vector<Clause *> learnts_;
    std::vector<std::vector<Clause *>> watches_; // indexed by lit code
    std::vector<int8_t> assigns_;                // kUndef / 0 / 1
    std::vector<int8_t> polarity_;               // saved phases
    std::vector<double> activity_;
    std::vector<Clause *> reason_;
    std::vector<int> level_;
    std::vector<Lit> trail_;
    std::vector<int> trail_lim_;
    std::vector<int8_t> seen_;
    std::vector<int> to_clear_;
    std::vector<int8_t> model_;
    size_t qhead_ = 0;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    double max_learnts_ = 0.0;
    bool ok_ = true;
    Stats stats_;

    struct VarHeap {
        std::vector<int> heap;
        std::vector<int> pos;
        const std::vector<double> *act = nullptr;
        void grow();
        bool contains(int v) const;
        void insert(int v);
        int pop();
        void update(int v);
        void percolate_up(int i);
        void percolate_down(int i);
    };
    VarHeap order_;

    int8_t value(Lit p) const {
        int8_t a = assigns_[p.var()];
        if (a == kUndef)
            return kUndef;
        return p.neg() ? static_cast<int8_t>(1 - a) : a;
    }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    void attach(Clause *c);
    void detach(Clause *c);
    void enqueue(Lit p, Clause *from);
    Clause *propagate();
    void analyze(Clause *confl, std::vector<Lit> &out_learnt, int &out_btlevel);
    bool lit_redundant(Lit p, uint32_t abstract_levels);
    void cancel_until(int lvl);
    Lit pick_branch();
    void var_bump(int v);
    void var_decay() { var_inc_ *= (1.0 / 0.95); }
    void cla_bump(Clause *c);
    void cla_decay() { cla_inc_ *= (1.0 / 0.999); }
    void reduce_db();
    Result search(int64_t abs_conflict_limit, const std::vector<Lit> &assumptions,
                  int64_t restart_limit);
};

} // namespace leakcheck
