#include "leakcheck/engine.hpp"

#include <cassert>
#include <filesystem>
#include <fstream>
#include <queue>
#include <unordered_set>

namespace leakcheck {

// ---- unroller: frame-indexed Tseitin encoding of the product system ----

struct CoverEngine::Unroller {
    const TransitionSystem &ts;
    SatSolver &sat;
    bool bind_init;
    int true_var;
    // literal code per (frame, aig node); -1 = not materialized
    std::vector<std::vector<int>> frame_lits;

    Unroller(const TransitionSystem &t, SatSolver &s, bool init) : ts(t), sat(s), bind_init(init) {
        true_var = sat.new_var();
        sat.add_clause({Lit::make(true_var)});
    }

    Lit lit_true() const { return Lit::make(true_var); }
    Lit lit_false() const { return Lit::make(true_var, true); }

    int frames_ready() const { return static_cast<int>(frame_lits.size()); }

    void ensure_frame(int frame) {
        while (frames_ready() <= frame)
            materialize(frames_ready());
    }

    Lit lit_of(AigLit a, int frame) const {
        int code = frame_lits[frame][aig_node(a)];
        assert(code >= 0);
        Lit l{code};
        return aig_sign(a) ? ~l : l;
    }

private:
    void materialize(int frame) {
        size_t n = ts.aig.num_nodes();
        frame_lits.emplace_back(n, -1);
        auto &lits = frame_lits[frame];
        lits[0] = lit_false().code; // constant node

        for (uint32_t idx = 1; idx < n; idx++) {
            if (ts.aig.is_input(idx)) {
                lits[idx] = input_lit(idx, frame).code;
                continue;
            }
            const auto &node = ts.aig.node(idx);
            Lit a{lits[aig_node(node.a)]};
            if (aig_sign(node.a))
                a = ~a;
            Lit b{lits[aig_node(node.b)]};
            if (aig_sign(node.b))
                b = ~b;
            int v = sat.new_var();
            Lit out = Lit::make(v);
            sat.add_clause({~out, a});
            sat.add_clause({~out, b});
            sat.add_clause({out, ~a, ~b});
            lits[idx] = out.code;
        }
    }

    Lit input_lit(uint32_t node, int frame) {
        auto it = ts.leaves.find(node);
        assert(it != ts.leaves.end());
        const auto &leaf = it->second;
        if (leaf.kind == TransitionSystem::LeafKind::FreeInput)
            return Lit::make(sat.new_var());
        const auto &sv = ts.states[leaf.index];
        if (sv.rigid && frame > 0)
            return lit_of(sv.cur[leaf.bit], 0);
        if (frame == 0) {
            if (bind_init && sv.init[leaf.bit] == 0)
                return lit_false();
            if (bind_init && sv.init[leaf.bit] == 1)
                return lit_true();
            return Lit::make(sat.new_var());
        }
        return lit_of(sv.next[leaf.bit], frame - 1);
    }
};

// ---- construction ----

CoverEngine::CoverEngine(const FlatNetlist &net, const TsOptions &opts, const Monitor &monitor)
    : ts_(compile_ts(net, opts)), monitor_(monitor) {
    // Frozen variables referenced by guards become rigid state.
    std::function<void(const Expr &)> reg_aux = [&](const Expr &e) {
        if (e->op == ExprOp::Aux)
            ts_.add_rigid_aux(e->aux, e->width);
        for (const auto &a : e->args)
            reg_aux(a);
    };
    for (const auto &e : monitor_.edges)
        reg_aux(e.guard);

    // Monitor NFA states become one-hot state bits; the start state is armed
    // every cycle so matches may begin anywhere.
    for (int s = 0; s < monitor_.num_states; s++) {
        TransitionSystem::StateVar sv;
        sv.name = "monitor.s" + std::to_string(s);
        AigLit in = ts_.aig.new_input();
        ts_.leaves[aig_node(in)] = {TransitionSystem::LeafKind::StateBit,
                                    static_cast<int>(ts_.states.size()), 0};
        sv.cur.push_back(in);
        sv.init.push_back(s == monitor_.start ? 1 : 0);
        monitor_states_.push_back(static_cast<int>(ts_.states.size()));
        ts_.states.push_back(std::move(sv));
    }
    std::vector<AigLit> next(monitor_.num_states, kAigFalse);
    for (const auto &e : monitor_.edges) {
        AigLit g = ts_.blast_bool(e.guard);
        AigLit from = ts_.states[monitor_states_[e.from]].cur[0];
        next[e.to] = ts_.aig.mk_or(next[e.to], ts_.aig.mk_and(from, g));
    }
    next[monitor_.start] = kAigTrue;
    accept_ = kAigFalse;
    for (int s = 0; s < monitor_.num_states; s++) {
        ts_.states[monitor_states_[s]].next = {next[s]};
        if (monitor_.accepting[s])
            accept_ = ts_.aig.mk_or(accept_, next[s]);
    }
}

// ---- witness extraction ----

Witness CoverEngine::extract_witness(const Unroller &u, const SatSolver &sat, int frames) const {
    Witness w;
    w.length = frames;
    w.inputs.resize(frames);
    auto val_of = [&](AigLit a, int frame) {
        Lit l = u.lit_of(a, frame);
        bool v = sat.model_value(l.var());
        return l.neg() ? !v : v;
    };
    for (int f = 0; f < frames; f++) {
        for (const auto &iv : ts_.free_inputs) {
            uint64_t v = 0;
            for (size_t b = 0; b < iv.bits.size(); b++)
                if (val_of(iv.bits[b], f))
                    v |= uint64_t{1} << b;
            w.inputs[f][iv.signal] = v;
        }
    }
    for (const auto &sv : ts_.states) {
        uint64_t v = 0;
        for (size_t b = 0; b < sv.cur.size(); b++)
            if (val_of(sv.cur[b], 0))
                v |= uint64_t{1} << b;
        if (sv.rigid)
            w.aux[sv.name] = v;
        else
            w.initial_state[sv.name] = v;
    }
    if (ts_.stack_overflow_state >= 0) {
        // flag witnesses that drive the auxiliary stack past its depth
        AigLit ovf = ts_.states[ts_.stack_overflow_state].cur[0];
        for (int f = 0; f < frames; f++)
            w.stack_overflow |= val_of(ovf, f);
        AigLit ovf_next = ts_.states[ts_.stack_overflow_state].next[0];
        w.stack_overflow |= val_of(ovf_next, frames - 1);
    }
    return w;
}

void CoverEngine::dump_query(const SatSolver &sat, const std::vector<Lit> &assumps,
                             const std::string &tag) {
    if (dimacs_dir.empty())
        return;
    std::filesystem::create_directories(dimacs_dir);
    std::ofstream os(dimacs_dir + "/" + tag + ".cnf");
    os << "c " << tag << "\n";
    sat.dump_dimacs(os, assumps);
}

// ---- BMC ----

Verdict CoverEngine::bmc(int max_k, int64_t conflict_budget) {
    Verdict v;
    if (monitor_.accepts_empty()) {
        v.kind = VerdictKind::Covered;
        v.method = ProofMethod::Bmc;
        v.bound = -1;
        v.detail = "sequence accepts the empty trace";
        return v;
    }
    SatSolver sat;
    Unroller u(ts_, sat, /*bind_init=*/true);
    for (int k = 0; k <= max_k; k++) {
        u.ensure_frame(k);
        for (AigLit c : ts_.constraints)
            sat.add_clause({u.lit_of(c, k)});
        std::vector<Lit> assumps{u.lit_of(accept_, k)};
        queries_++;
        dump_query(sat, assumps, "bmc_k" + std::to_string(k));
        SatSolver::Result r = sat.solve(assumps, conflict_budget);
        if (r == SatSolver::Result::Sat) {
            v.kind = VerdictKind::Covered;
            v.method = ProofMethod::Bmc;
            v.bound = k;
            v.witness = extract_witness(u, sat, k + 1);
            return v;
        }
        if (r == SatSolver::Result::Undef) {
            v.kind = VerdictKind::Unknown;
            v.method = ProofMethod::Bmc;
            v.bound = k;
            v.detail = "SAT budget exhausted at bound " + std::to_string(k);
            return v;
        }
        bmc_verified_k_ = k;
    }
    v.kind = VerdictKind::Unknown;
    v.method = ProofMethod::Bmc;
    v.bound = max_k;
    v.detail = "no cover within bound " + std::to_string(max_k);
    return v;
}

// ---- lemmas ----

bool CoverEngine::verify_lemma_lit(AigLit lemma) {
    {
        // must hold in every initial state
        SatSolver sat;
        Unroller u(ts_, sat, /*bind_init=*/true);
        u.ensure_frame(0);
        queries_++;
        if (sat.solve({~u.lit_of(lemma, 0)}) != SatSolver::Result::Unsat)
            return false;
    }
    {
        // 1-inductive under the constraints
        SatSolver sat;
        Unroller u(ts_, sat, /*bind_init=*/false);
        u.ensure_frame(1);
        sat.add_clause({u.lit_of(lemma, 0)});
        for (AigLit c : ts_.constraints) {
            sat.add_clause({u.lit_of(c, 0)});
            sat.add_clause({u.lit_of(c, 1)});
        }
        for (AigLit prev : lemmas_) {
            sat.add_clause({u.lit_of(prev, 0)});
            sat.add_clause({u.lit_of(prev, 1)});
        }
        queries_++;
        if (sat.solve({~u.lit_of(lemma, 1)}) != SatSolver::Result::Unsat)
            return false;
    }
    return true;
}

bool CoverEngine::add_lemma(const Expr &candidate) {
    std::vector<int> refs;
    collect_signals(candidate, refs);
    for (int r : refs)
        if (!ts_.net->signal(r).is_clocked())
            throw InputError("lemmas may only reference registers, memories and aux state");
    AigLit lit = ts_.blast_bool(candidate);
    if (!verify_lemma_lit(lit))
        return false;
    lemmas_.push_back(lit);
    return true;
}

void CoverEngine::generate_auto_lemmas() {
    Aig &g = ts_.aig;

    // Unreachable-monitor-state pruning: a state is dead when every incoming
    // edge guard is unsatisfiable under the constraints; surviving states are
    // closed forward from the armed start.
    std::vector<char> edge_feasible(monitor_.edges.size(), 1);
    {
        // Blast guards first so the AIG is complete before unrolling.
        std::vector<AigLit> guard_lits;
        for (const auto &e : monitor_.edges)
            guard_lits.push_back(ts_.blast_bool(e.guard));
        SatSolver sat;
        Unroller u(ts_, sat, /*bind_init=*/false);
        u.ensure_frame(0);
        for (AigLit c : ts_.constraints)
            sat.add_clause({u.lit_of(c, 0)});
        for (size_t i = 0; i < monitor_.edges.size(); i++) {
            queries_++;
            edge_feasible[i] =
                sat.solve({u.lit_of(guard_lits[i], 0)}) != SatSolver::Result::Unsat;
        }
    }

    // Forward closure over feasible edges from the armed start state.
    std::vector<char> reachable(monitor_.num_states, 0);
    reachable[monitor_.start] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < monitor_.edges.size(); i++) {
            const auto &e = monitor_.edges[i];
            if (edge_feasible[i] && reachable[e.from] && !reachable[e.to]) {
                reachable[e.to] = 1;
                changed = true;
            }
        }
    }
    for (int s = 0; s < monitor_.num_states; s++) {
        if (reachable[s])
            continue;
        AigLit lemma = aig_not(ts_.states[monitor_states_[s]].cur[0]);
        if (verify_lemma_lit(lemma))
            lemmas_.push_back(lemma);
    }

    // Frozen-variable domain lemmas, one per edge whose guard pins the
    // variable against a field: downstream of that edge the variable holds
    // one of the values the field can take while the edge fires. The
    // write-side edge gives the strong lemma; read-side checks give weaker
    // ones, all verified individually.
    for (const auto &[aux_name, state_idx] : ts_.aux_index_) {
        struct Binding {
            size_t edge;
            Expr field;
        };
        std::vector<Binding> bindings;
        std::function<void(const Expr &, size_t)> scan = [&](const Expr &e, size_t edge) {
            if (e->op == ExprOp::LogAnd) {
                scan(e->args[0], edge);
                scan(e->args[1], edge);
                return;
            }
            if (e->op == ExprOp::Eq) {
                if (e->args[0]->op == ExprOp::Aux && e->args[0]->aux == aux_name)
                    bindings.push_back({edge, e->args[1]});
                else if (e->args[1]->op == ExprOp::Aux && e->args[1]->aux == aux_name)
                    bindings.push_back({edge, e->args[0]});
            }
        };
        for (size_t i = 0; i < monitor_.edges.size(); i++)
            scan(monitor_.edges[i].guard, i);

        constexpr int kDomainCap = 64;
        for (const auto &b : bindings) {
            // possible field values in cycles where this edge can fire
            std::vector<uint64_t> domain;
            bool capped = false;
            AigLit guard_lit = ts_.blast_bool(monitor_.edges[b.edge].guard);
            BitVec field_bits = ts_.blast(b.field);
            {
                SatSolver sat;
                Unroller u(ts_, sat, /*bind_init=*/false);
                u.ensure_frame(0);
                for (AigLit c : ts_.constraints)
                    sat.add_clause({u.lit_of(c, 0)});
                std::vector<Lit> assumps{u.lit_of(guard_lit, 0)};
                for (;;) {
                    queries_++;
                    SatSolver::Result r = sat.solve(assumps);
                    if (r != SatSolver::Result::Sat)
                        break;
                    uint64_t v = 0;
                    std::vector<Lit> block;
                    for (size_t bit = 0; bit < field_bits.size(); bit++) {
                        Lit l = u.lit_of(field_bits[bit], 0);
                        bool bv = sat.model_value(l.var()) != l.neg();
                        if (bv)
                            v |= uint64_t{1} << bit;
                        block.push_back(bv ? ~Lit{l.code} : Lit{l.code});
                    }
                    if (std::find(domain.begin(), domain.end(), v) == domain.end())
                        domain.push_back(v);
                    if (static_cast<int>(domain.size()) > kDomainCap) {
                        capped = true;
                        break;
                    }
                    sat.add_clause(block);
                }
            }
            if (capped || domain.empty())
                continue;

            // states at or beyond this edge's target
            std::vector<char> beyond(monitor_.num_states, 0);
            beyond[monitor_.edges[b.edge].to] = 1;
            bool grow = true;
            while (grow) {
                grow = false;
                for (const auto &e : monitor_.edges)
                    if (beyond[e.from] && !beyond[e.to] && e.from != monitor_.start) {
                        beyond[e.to] = 1;
                        grow = true;
                    }
            }

            AigLit any_beyond = kAigFalse;
            for (int s = 0; s < monitor_.num_states; s++)
                if (beyond[s] && s != monitor_.start)
                    any_beyond = g.mk_or(any_beyond, ts_.states[monitor_states_[s]].cur[0]);
            const auto &aux_bits = ts_.states[state_idx].cur;
            AigLit in_domain = kAigFalse;
            for (uint64_t v : domain)
                in_domain = g.mk_or(
                    in_domain,
                    bv_eq(g, aux_bits, bv_const(v, static_cast<int>(aux_bits.size()))));
            AigLit lemma = g.mk_implies(any_beyond, in_domain);
            if (verify_lemma_lit(lemma))
                lemmas_.push_back(lemma);
        }
    }
}

// ---- k-induction ----

Verdict CoverEngine::prove_by_induction(int max_depth, int64_t conflict_budget) {
    Verdict v;
    v.method = ProofMethod::KInduction;
    if (bmc_verified_k_ < 0) {
        v.kind = VerdictKind::Unknown;
        v.detail = "no BMC base case available";
        return v;
    }
    int depth_limit = std::min(max_depth, bmc_verified_k_);

    SatSolver sat;
    Unroller u(ts_, sat, /*bind_init=*/false);

    // Non-rigid state bits, for the simple-path condition.
    std::vector<AigLit> path_bits;
    for (const auto &sv : ts_.states)
        if (!sv.rigid)
            for (AigLit b : sv.cur)
                path_bits.push_back(b);

    auto add_frame_facts = [&](int f) {
        for (AigLit c : ts_.constraints)
            sat.add_clause({u.lit_of(c, f)});
        for (AigLit l : lemmas_)
            sat.add_clause({u.lit_of(l, f)});
    };

    u.ensure_frame(0);
    add_frame_facts(0);

    for (int k = 1; k <= depth_limit; k++) {
        u.ensure_frame(k);
        add_frame_facts(k);
        // pairwise distinct states (simple path)
        for (int j = 0; j < k; j++) {
            std::vector<Lit> diff;
            for (AigLit b : path_bits) {
                Lit a = u.lit_of(b, j);
                Lit c = u.lit_of(b, k);
                int d = sat.new_var();
                Lit dl = Lit::make(d);
                // d <-> a xor c
                sat.add_clause({~dl, a, c});
                sat.add_clause({~dl, ~a, ~c});
                sat.add_clause({dl, ~a, c});
                sat.add_clause({dl, a, ~c});
                diff.push_back(dl);
            }
            sat.add_clause(diff);
        }
        std::vector<Lit> assumps{u.lit_of(accept_, k)};
        queries_++;
        dump_query(sat, assumps, "ind_k" + std::to_string(k));
        SatSolver::Result r = sat.solve(assumps, conflict_budget);
        if (r == SatSolver::Result::Unsat) {
            v.kind = VerdictKind::Uncoverable;
            v.bound = k;
            v.detail = "k-induction at depth " + std::to_string(k) + " with " +
                       std::to_string(lemmas_.size()) + " lemmas";
            return v;
        }
        if (r == SatSolver::Result::Undef) {
            v.kind = VerdictKind::Unknown;
            v.bound = k;
            v.detail = "SAT budget exhausted in induction step";
            return v;
        }
        sat.add_clause({~u.lit_of(accept_, k)});
    }
    v.kind = VerdictKind::Unknown;
    v.bound = depth_limit;
    v.detail = "induction inconclusive up to depth " + std::to_string(depth_limit);
    return v;
}

// ---- explicit-state reachability ----

Verdict CoverEngine::explicit_search(int state_bit_limit, int input_bit_limit) {
    Verdict v;
    v.method = ProofMethod::ExplicitState;
    if (monitor_.accepts_empty()) {
        v.kind = VerdictKind::Covered;
        v.bound = -1;
        v.detail = "sequence accepts the empty trace";
        return v;
    }

    int state_bits = 0;
    for (const auto &sv : ts_.states)
        state_bits += static_cast<int>(sv.cur.size());
    int input_bits = 0;
    for (const auto &iv : ts_.free_inputs)
        input_bits += static_cast<int>(iv.bits.size());
    if (state_bits > state_bit_limit) {
        v.kind = VerdictKind::Unknown;
        v.detail = "state bits " + std::to_string(state_bits) + " exceed the explicit-state limit";
        return v;
    }
    if (input_bits > input_bit_limit) {
        v.kind = VerdictKind::Unknown;
        v.detail = "input bits exceed the explicit-state limit";
        return v;
    }
    if (state_bits > 28) { // packing guard
        v.kind = VerdictKind::Unknown;
        v.detail = "explicit-state packing limit exceeded";
        return v;
    }

    // Flat orderings of state/input bits.
    struct BitRef {
        AigLit cur;
        AigLit next;
    };
    std::vector<BitRef> sbits;
    std::vector<int> init_fixed; // -1 free / 0 / 1
    for (const auto &sv : ts_.states)
        for (size_t b = 0; b < sv.cur.size(); b++) {
            sbits.push_back({sv.cur[b], sv.next[b]});
            init_fixed.push_back(sv.init[b]);
        }
    std::vector<AigLit> ibits;
    for (const auto &iv : ts_.free_inputs)
        for (AigLit b : iv.bits)
            ibits.push_back(b);

    const Aig &g = ts_.aig;
    size_t n_nodes = g.num_nodes();
    std::vector<uint8_t> val(n_nodes, 0);
    std::unordered_map<uint32_t, std::pair<int, int>> input_role; // node -> (is_state, flat idx)
    for (size_t i = 0; i < sbits.size(); i++)
        input_role[aig_node(sbits[i].cur)] = {1, static_cast<int>(i)};
    for (size_t i = 0; i < ibits.size(); i++)
        input_role[aig_node(ibits[i])] = {0, static_cast<int>(i)};

    auto eval_all = [&](uint64_t state, uint64_t input) {
        val[0] = 0;
        for (uint32_t idx = 1; idx < n_nodes; idx++) {
            if (g.is_input(idx)) {
                auto it = input_role.find(idx);
                if (it == input_role.end()) {
                    val[idx] = 0;
                    continue;
                }
                uint64_t word = it->second.first ? state : input;
                val[idx] = (word >> it->second.second) & 1;
            } else {
                const auto &node = g.node(idx);
                uint8_t a = val[aig_node(node.a)] ^ static_cast<uint8_t>(aig_sign(node.a));
                uint8_t b = val[aig_node(node.b)] ^ static_cast<uint8_t>(aig_sign(node.b));
                val[idx] = a & b;
            }
        }
    };
    auto lit_val = [&](AigLit a) -> bool {
        return (val[aig_node(a)] ^ static_cast<uint8_t>(aig_sign(a))) != 0;
    };

    // Initial state set.
    std::vector<uint64_t> frontier;
    {
        std::vector<int> free_idx;
        uint64_t base = 0;
        for (size_t i = 0; i < sbits.size(); i++) {
            if (init_fixed[i] < 0)
                free_idx.push_back(static_cast<int>(i));
            else if (init_fixed[i] == 1)
                base |= uint64_t{1} << i;
        }
        if (free_idx.size() > 24) {
            v.kind = VerdictKind::Unknown;
            v.detail = "too many free initial bits for explicit search";
            return v;
        }
        for (uint64_t m = 0; m < (uint64_t{1} << free_idx.size()); m++) {
            uint64_t s = base;
            for (size_t i = 0; i < free_idx.size(); i++)
                if ((m >> i) & 1)
                    s |= uint64_t{1} << free_idx[i];
            frontier.push_back(s);
        }
    }

    std::unordered_set<uint64_t> visited(frontier.begin(), frontier.end());
    struct Parent {
        uint64_t prev;
        uint64_t input;
    };
    std::unordered_map<uint64_t, Parent> parent;
    std::queue<uint64_t> queue;
    for (uint64_t s : frontier)
        queue.push(s);

    uint64_t n_inputs = uint64_t{1} << ibits.size();
    while (!queue.empty()) {
        uint64_t s = queue.front();
        queue.pop();
        for (uint64_t in = 0; in < n_inputs; in++) {
            eval_all(s, in);
            bool cons_ok = true;
            for (AigLit c : ts_.constraints)
                if (!lit_val(c)) {
                    cons_ok = false;
                    break;
                }
            if (!cons_ok)
                continue;
            if (lit_val(accept_)) {
                // reconstruct the input trace
                std::vector<std::pair<uint64_t, uint64_t>> chain; // (state, input)
                chain.emplace_back(s, in);
                uint64_t cur = s;
                while (parent.count(cur)) {
                    auto p = parent.at(cur);
                    chain.emplace_back(p.prev, p.input);
                    cur = p.prev;
                }
                std::reverse(chain.begin(), chain.end());
                Witness w;
                w.length = static_cast<int>(chain.size());
                w.inputs.resize(chain.size());
                for (size_t f = 0; f < chain.size(); f++) {
                    size_t bit = 0;
                    for (const auto &iv : ts_.free_inputs) {
                        uint64_t word = 0;
                        for (size_t b = 0; b < iv.bits.size(); b++, bit++)
                            if ((chain[f].second >> bit) & 1)
                                word |= uint64_t{1} << b;
                        w.inputs[f][iv.signal] = word;
                    }
                }
                size_t bit = 0;
                uint64_t s0 = chain[0].first;
                for (const auto &sv : ts_.states) {
                    uint64_t word = 0;
                    for (size_t b = 0; b < sv.cur.size(); b++, bit++)
                        if ((s0 >> bit) & 1)
                            word |= uint64_t{1} << b;
                    if (sv.rigid)
                        w.aux[sv.name] = word;
                    else
                        w.initial_state[sv.name] = word;
                }
                v.kind = VerdictKind::Covered;
                v.bound = w.length - 1;
                v.witness = std::move(w);
                v.detail = "explicit reachability over " + std::to_string(visited.size()) +
                           " states";
                return v;
            }
            uint64_t ns = 0;
            for (size_t i = 0; i < sbits.size(); i++)
                if (lit_val(sbits[i].next))
                    ns |= uint64_t{1} << i;
            if (!visited.count(ns)) {
                visited.insert(ns);
                parent[ns] = {s, in};
                queue.push(ns);
            }
        }
    }
    v.kind = VerdictKind::Uncoverable;
    v.bound = static_cast<int>(visited.size());
    v.detail = "exhaustive reachability: " + std::to_string(visited.size()) + " states";
    return v;
}

} // namespace leakcheck
