#include "leakcheck/monitor.hpp"

namespace leakcheck {

namespace {

// Compositional construction on letter-edge NFAs; no epsilon edges are ever
// materialized. Invariant: accepts_empty() <=> start is accepting.
Monitor mk_atom(const Expr &cond) {
    Monitor m;
    m.num_states = 2;
    m.start = 0;
    m.accepting = {false, true};
    m.edges.push_back({0, 1, cond});
    return m;
}

Monitor shift(const Monitor &m, int offset) {
    Monitor out = m;
    out.start += offset;
    for (auto &e : out.edges) {
        e.from += offset;
        e.to += offset;
    }
    return out;
}

std::vector<Monitor::Edge> start_edges(const Monitor &m) {
    std::vector<Monitor::Edge> out;
    for (const auto &e : m.edges)
        if (e.from == m.start)
            out.push_back(e);
    return out;
}

Monitor mk_concat(const Monitor &a, const Monitor &b_in) {
    Monitor b = shift(b_in, a.num_states);
    Monitor m;
    m.num_states = a.num_states + b_in.num_states;
    m.start = a.start;
    m.accepting.assign(m.num_states, false);
    for (int s = 0; s < b_in.num_states; s++)
        if (b_in.accepting[s])
            m.accepting[s + a.num_states] = true;
    if (b_in.accepting[b_in.start]) // b accepts empty: a's finals accept too
        for (int s = 0; s < a.num_states; s++)
            if (a.accepting[s])
                m.accepting[s] = true;
    m.edges = a.edges;
    for (const auto &e : b.edges)
        m.edges.push_back(e);
    // a's accepting states continue into b.
    auto b_starts = start_edges(b);
    for (int s = 0; s < a.num_states; s++)
        if (a.accepting[s])
            for (const auto &e : b_starts)
                m.edges.push_back({s, e.to, e.guard});
    return m;
}

Monitor mk_fuse(const Monitor &a, const Monitor &b_in) {
    // Overlap-concatenation: the last letter of an a-match is simultaneously
    // the first letter of a b-match, so both guards hold in that cycle.
    Monitor b = shift(b_in, a.num_states);
    Monitor m;
    m.num_states = a.num_states + b_in.num_states;
    m.start = a.start;
    m.accepting.assign(m.num_states, false);
    for (int s = 0; s < b_in.num_states; s++)
        if (b_in.accepting[s])
            m.accepting[s + a.num_states] = true;
    m.edges = a.edges;
    for (const auto &e : b.edges)
        m.edges.push_back(e);
    auto b_starts = start_edges(b);
    for (const auto &ea : a.edges) {
        if (!a.accepting[ea.to])
            continue;
        for (const auto &eb : b_starts)
            m.edges.push_back({ea.from, eb.to, b_and(ea.guard, eb.guard)});
    }
    return m;
}

Monitor mk_repinf(const Monitor &a) {
    Monitor m = a;
    // Accepting states restart the body by borrowing the start's edges.
    auto starts = start_edges(a);
    std::vector<Monitor::Edge> extra;
    for (int st = 0; st < m.num_states; st++) {
        if (!m.accepting[st] || st == m.start)
            continue;
        for (const auto &s : starts)
            extra.push_back({st, s.to, s.guard});
    }
    for (auto &e : extra)
        m.edges.push_back(e);
    m.accepting[m.start] = true; // zero repetitions
    return m;
}

} // namespace

Monitor compile_monitor(const Seq &seq) {
    switch (seq->op) {
    case SeqOp::Atom:
        return mk_atom(seq->atom);
    case SeqOp::Concat:
        return mk_concat(compile_monitor(seq->a), compile_monitor(seq->b));
    case SeqOp::Fuse:
        return mk_fuse(compile_monitor(seq->a), compile_monitor(seq->b));
    case SeqOp::RepInf:
        return mk_repinf(compile_monitor(seq->a));
    }
    throw InputError("bad sequence node");
}

bool seq_matches(const Seq &seq, const AtomEval &eval, int i, int j) {
    switch (seq->op) {
    case SeqOp::Atom:
        return i == j && eval(seq->atom, i);
    case SeqOp::Concat:
        for (int k = i - 1; k <= j; k++)
            if (seq_matches(seq->a, eval, i, k) && seq_matches(seq->b, eval, k + 1, j))
                return true;
        return false;
    case SeqOp::Fuse:
        for (int k = i; k <= j; k++)
            if (seq_matches(seq->a, eval, i, k) && seq_matches(seq->b, eval, k, j))
                return true;
        return false;
    case SeqOp::RepInf: {
        // body is an atom: every cycle in the range satisfies it
        if (j < i)
            return true;
        for (int t = i; t <= j; t++)
            if (!eval(seq->a->atom, t))
                return false;
        return true;
    }
    }
    return false;
}

bool monitor_accepts(const Monitor &m, const AtomEval &eval, int len) {
    if (len == 0)
        return m.accepts_empty();
    std::vector<bool> active(m.num_states, false);
    active[m.start] = true;
    for (int cycle = 0; cycle < len; cycle++) {
        std::vector<bool> next(m.num_states, false);
        for (const auto &e : m.edges)
            if (active[e.from] && eval(e.guard, cycle))
                next[e.to] = true;
        active = std::move(next);
    }
    for (int s = 0; s < m.num_states; s++)
        if (active[s] && m.accepting[s])
            return true;
    return false;
}

} // namespace leakcheck
