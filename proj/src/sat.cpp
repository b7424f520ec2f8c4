#include "leakcheck/sat.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>

namespace leakcheck {

// ---- activity-ordered heap ----

void SatSolver::VarHeap::grow() {
    pos.push_back(-1);
}

bool SatSolver::VarHeap::contains(int v) const { return pos[v] >= 0; }

void SatSolver::VarHeap::percolate_up(int i) {
    int v = heap[i];
    while (i > 0) {
        int parent = (i - 1) >> 1;
        if ((*act)[heap[parent]] >= (*act)[v])
            break;
        heap[i] = heap[parent];
        pos[heap[i]] = i;
        i = parent;
    }
    heap[i] = v;
    pos[v] = i;
}

void SatSolver::VarHeap::percolate_down(int i) {
    int v = heap[i];
    size_t n = heap.size();
    for (;;) {
        size_t child = 2 * static_cast<size_t>(i) + 1;
        if (child >= n)
            break;
        if (child + 1 < n && (*act)[heap[child + 1]] > (*act)[heap[child]])
            child++;
        if ((*act)[heap[child]] <= (*act)[v])
            break;
        heap[i] = heap[child];
        pos[heap[i]] = i;
        i = static_cast<int>(child);
    }
    heap[i] = v;
    pos[v] = i;
}

void SatSolver::VarHeap::insert(int v) {
    if (contains(v))
        return;
    heap.push_back(v);
    pos[v] = static_cast<int>(heap.size()) - 1;
    percolate_up(pos[v]);
}

int SatSolver::VarHeap::pop() {
    int v = heap[0];
    heap[0] = heap.back();
    pos[heap[0]] = 0;
    heap.pop_back();
    pos[v] = -1;
    if (!heap.empty())
        percolate_down(0);
    return v;
}

void SatSolver::VarHeap::update(int v) {
    if (contains(v))
        percolate_up(pos[v]);
}

// ---- solver ----

int SatSolver::new_var() {
    int v = static_cast<int>(assigns_.size());
    assigns_.push_back(kUndef);
    polarity_.push_back(0);
    activity_.push_back(0.0);
    reason_.push_back(nullptr);
    level_.push_back(0);
    seen_.push_back(0);
    model_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    order_.grow();
    order_.insert(v);
    return v;
}

bool SatSolver::add_clause(std::vector<Lit> lits) {
    if (!ok_)
        return false;
    assert(decision_level() == 0);
    std::sort(lits.begin(), lits.end(), [](Lit a, Lit b) { return a.code < b.code; });
    std::vector<Lit> out;
    Lit prev{-2};
    for (Lit p : lits) {
        if (value(p) == 1 || p == ~prev)
            return true; // satisfied or tautological
        if (value(p) == 0 || p == prev)
            continue; // falsified at level 0 or duplicate
        out.push_back(p);
        prev = p;
    }
    if (out.empty()) {
        ok_ = false;
        return false;
    }
    if (out.size() == 1) {
        enqueue(out[0], nullptr);
        if (propagate() != nullptr)
            ok_ = false;
        return ok_;
    }
    clauses_.push_back(Clause{std::move(out), 0.0, false});
    Clause *c = &clauses_.back();
    problem_.push_back(c);
    attach(c);
    return true;
}

void SatSolver::attach(Clause *c) {
    watches_[(~c->lits[0]).code].push_back(c);
    watches_[(~c->lits[1]).code].push_back(c);
}

void SatSolver::detach(Clause *c) {
    for (int i = 0; i < 2; i++) {
        auto &w = watches_[(~c->lits[i]).code];
        w.erase(std::remove(w.begin(), w.end(), c), w.end());
    }
}

void SatSolver::enqueue(Lit p, Clause *from) {
    assert(value(p) == kUndef);
    assigns_[p.var()] = p.neg() ? 0 : 1;
    polarity_[p.var()] = p.neg() ? 1 : 0;
    reason_[p.var()] = from;
    level_[p.var()] = decision_level();
    trail_.push_back(p);
}

SatSolver::Clause *SatSolver::propagate() {
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        stats_.propagations++;
        auto &ws = watches_[p.code];
        size_t keep = 0;
        size_t i = 0;
        for (; i < ws.size(); i++) {
            Clause *c = ws[i];
            Lit false_lit = ~p;
            if (c->lits[0] == false_lit)
                std::swap(c->lits[0], c->lits[1]);
            assert(c->lits[1] == false_lit);
            if (value(c->lits[0]) == 1) {
                ws[keep++] = c;
                continue;
            }
            bool moved = false;
            for (size_t k = 2; k < c->lits.size(); k++) {
                if (value(c->lits[k]) != 0) {
                    std::swap(c->lits[1], c->lits[k]);
                    watches_[(~c->lits[1]).code].push_back(c);
                    moved = true;
                    break;
                }
            }
            if (moved)
                continue;
            ws[keep++] = c;
            if (value(c->lits[0]) == 0) {
                // conflict: keep the remaining watchers and bail out
                for (size_t k = i + 1; k < ws.size(); k++)
                    ws[keep++] = ws[k];
                ws.resize(keep);
                qhead_ = trail_.size();
                return c;
            }
            enqueue(c->lits[0], c);
        }
        ws.resize(keep);
    }
    return nullptr;
}

void SatSolver::var_bump(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (auto &a : activity_)
            a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    order_.update(v);
}

void SatSolver::cla_bump(Clause *c) {
    if (!c->learnt)
        return;
    c->activity += cla_inc_;
    if (c->activity > 1e20) {
        for (Clause *l : learnts_)
            l->activity *= 1e-20;
        cla_inc_ *= 1e-20;
    }
}

void SatSolver::analyze(Clause *confl, std::vector<Lit> &out_learnt, int &out_btlevel) {
    int path_count = 0;
    Lit p{-2};
    out_learnt.clear();
    out_learnt.push_back(Lit{-2}); // slot for the asserting literal
    size_t index = trail_.size();

    do {
        assert(confl != nullptr);
        cla_bump(confl);
        for (size_t j = (p.code == -2 ? 0 : 1); j < confl->lits.size(); j++) {
            Lit q = confl->lits[j];
            if (!seen_[q.var()] && level_[q.var()] > 0) {
                var_bump(q.var());
                seen_[q.var()] = 1;
                if (level_[q.var()] >= decision_level())
                    path_count++;
                else
                    out_learnt.push_back(q);
            }
        }
        while (!seen_[trail_[--index].var()])
            ;
        p = trail_[index];
        confl = reason_[p.var()];
        seen_[p.var()] = 0;
        path_count--;
    } while (path_count > 0);
    out_learnt[0] = ~p;

    // Everything marked so far (including literals minimization removes and
    // probe marks from lit_redundant) must be unmarked at the end.
    to_clear_.clear();
    for (Lit q : out_learnt)
        to_clear_.push_back(q.var());

    uint32_t abstract = 0;
    for (size_t i = 1; i < out_learnt.size(); i++)
        abstract |= uint32_t{1} << (level_[out_learnt[i].var()] & 31);
    size_t keep = 1;
    for (size_t i = 1; i < out_learnt.size(); i++) {
        if (reason_[out_learnt[i].var()] == nullptr || !lit_redundant(out_learnt[i], abstract))
            out_learnt[keep++] = out_learnt[i];
    }
    out_learnt.resize(keep);

    out_btlevel = 0;
    if (out_learnt.size() > 1) {
        size_t max_i = 1;
        for (size_t i = 2; i < out_learnt.size(); i++)
            if (level_[out_learnt[i].var()] > level_[out_learnt[max_i].var()])
                max_i = i;
        std::swap(out_learnt[1], out_learnt[max_i]);
        out_btlevel = level_[out_learnt[1].var()];
    }

    for (int v : to_clear_)
        seen_[v] = 0;
}

bool SatSolver::lit_redundant(Lit p, uint32_t abstract_levels) {
    std::vector<Lit> stack{p};
    size_t top = to_clear_.size();
    bool redundant = true;
    while (!stack.empty() && redundant) {
        Lit q = stack.back();
        stack.pop_back();
        Clause *r = reason_[q.var()];
        if (r == nullptr) {
            redundant = false;
            break;
        }
        for (size_t j = 1; j < r->lits.size(); j++) {
            Lit l = r->lits[j];
            if (seen_[l.var()] || level_[l.var()] == 0)
                continue;
            if (reason_[l.var()] == nullptr ||
                ((uint32_t{1} << (level_[l.var()] & 31)) & abstract_levels) == 0) {
                redundant = false;
                break;
            }
            seen_[l.var()] = 1;
            to_clear_.push_back(l.var());
            stack.push_back(l);
        }
    }
    if (!redundant) {
        // drop only this probe's marks; keep memoized ones from successes
        for (size_t i = top; i < to_clear_.size(); i++)
            seen_[to_clear_[i]] = 0;
        to_clear_.resize(top);
    }
    return redundant;
}

void SatSolver::cancel_until(int lvl) {
    if (decision_level() <= lvl)
        return;
    for (size_t i = trail_.size(); i-- > static_cast<size_t>(trail_lim_[lvl]);) {
        int v = trail_[i].var();
        assigns_[v] = kUndef;
        reason_[v] = nullptr;
        order_.insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
}

Lit SatSolver::pick_branch() {
    while (!order_.heap.empty()) {
        int v = order_.pop();
        if (assigns_[v] == kUndef) {
            stats_.decisions++;
            return Lit::make(v, polarity_[v] != 0);
        }
    }
    return Lit{-2};
}

void SatSolver::reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(),
              [](const Clause *a, const Clause *b) { return a->activity < b->activity; });
    size_t keep_from = learnts_.size() / 2;
    size_t out = 0;
    for (size_t i = 0; i < learnts_.size(); i++) {
        Clause *c = learnts_[i];
        bool locked = false;
        for (Lit p : c->lits)
            if (reason_[p.var()] == c && value(p) == 1) {
                locked = true;
                break;
            }
        if (locked || c->lits.size() <= 2 || i >= keep_from) {
            learnts_[out++] = c;
        } else {
            detach(c);
            c->lits.clear();
            c->lits.shrink_to_fit();
        }
    }
    learnts_.resize(out);
}

SatSolver::Result SatSolver::search(int64_t abs_conflict_limit,
                                    const std::vector<Lit> &assumptions,
                                    int64_t restart_limit) {
    int64_t conflicts_here = 0;
    for (;;) {
        Clause *confl = propagate();
        if (confl != nullptr) {
            stats_.conflicts++;
            conflicts_here++;
            if (decision_level() == 0)
                return Result::Unsat;
            std::vector<Lit> learnt;
            int btlevel = 0;
            analyze(confl, learnt, btlevel);
            cancel_until(btlevel);
            if (learnt.size() == 1) {
                if (value(learnt[0]) == 0)
                    return Result::Unsat;
                if (value(learnt[0]) == kUndef)
                    enqueue(learnt[0], nullptr);
            } else {
                clauses_.push_back(Clause{learnt, cla_inc_, true});
                Clause *c = &clauses_.back();
                learnts_.push_back(c);
                attach(c);
                enqueue(learnt[0], c);
            }
            var_decay();
            cla_decay();
            if (static_cast<double>(learnts_.size()) > max_learnts_) {
                reduce_db();
                max_learnts_ *= 1.3;
            }
            if (abs_conflict_limit > 0 &&
                static_cast<int64_t>(stats_.conflicts) > abs_conflict_limit)
                return Result::Undef;
        } else {
            if (conflicts_here >= restart_limit)
                return Result::Undef; // restart
            Lit next{-2};
            while (decision_level() < static_cast<int>(assumptions.size())) {
                Lit a = assumptions[decision_level()];
                if (value(a) == 1) {
                    trail_lim_.push_back(static_cast<int>(trail_.size()));
                } else if (value(a) == 0) {
                    return Result::Unsat; // assumptions conflict with the formula
                } else {
                    next = a;
                    break;
                }
            }
            if (next.code == -2) {
                next = pick_branch();
                if (next.code == -2) {
                    for (int v = 0; v < num_vars(); v++)
                        model_[v] = assigns_[v] == kUndef ? 0 : assigns_[v];
                    return Result::Sat;
                }
            }
            trail_lim_.push_back(static_cast<int>(trail_.size()));
            enqueue(next, nullptr);
        }
    }
}

namespace {
// MiniSat's Luby restart sequence.
int64_t luby(int x) {
    int size, seq;
    for (size = 1, seq = 0; size < x + 1; seq++, size = 2 * size + 1)
        ;
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        seq--;
        x = x % size;
    }
    return int64_t{1} << seq;
}
} // namespace

SatSolver::Result SatSolver::solve(const std::vector<Lit> &assumptions, int64_t conflict_budget) {
    stats_.solves++;
    if (!ok_)
        return Result::Unsat;
    cancel_until(0);
    if (propagate() != nullptr) {
        ok_ = false;
        return Result::Unsat;
    }
    if (max_learnts_ <= 0)
        max_learnts_ = std::max<double>(1000.0, static_cast<double>(problem_.size()) * 0.4);
    int64_t limit =
        conflict_budget < 0 ? -1 : static_cast<int64_t>(stats_.conflicts) + conflict_budget;
    for (int restarts = 0;; restarts++) {
        Result r = search(limit, assumptions, 100 * luby(restarts));
        cancel_until(0);
        if (r != Result::Undef)
            return r;
        if (limit > 0 && static_cast<int64_t>(stats_.conflicts) > limit)
            return Result::Undef;
    }
}

void SatSolver::dump_dimacs(std::ostream &os, const std::vector<Lit> &assumptions) const {
    size_t n_clauses = assumptions.size();
    for (const Clause *c : problem_)
        if (!c->lits.empty())
            n_clauses++;
    size_t units = 0;
    for (size_t i = 0; i < trail_.size(); i++)
        if (level_[trail_[i].var()] == 0)
            units++;
    os << "p cnf " << num_vars() << " " << (n_clauses + units) << "\n";
    auto put = [&os](Lit p) { os << (p.neg() ? -(p.var() + 1) : (p.var() + 1)); };
    for (const Clause *c : problem_) {
        if (c->lits.empty())
            continue;
        for (size_t i = 0; i < c->lits.size(); i++) {
            put(c->lits[i]);
            os << " ";
        }
        os << "0\n";
    }
    for (size_t i = 0; i < trail_.size(); i++) {
        if (level_[trail_[i].var()] != 0)
            continue;
        put(trail_[i]);
        os << " 0\n";
    }
    for (Lit a : assumptions) {
        put(a);
        os << " 0\n";
    }
}

} // namespace leakcheck
