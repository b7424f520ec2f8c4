#include "leakcheck/propgen.hpp"

namespace leakcheck {

std::vector<SequentialBlock> split_blocks(const EdgeGraph &graph, const LeakagePath &path) {
    std::vector<SequentialBlock> blocks;
    SequentialBlock cur;
    for (int eidx : path.edges) {
        const AssignmentEdge &e = graph.edges[eidx];
        cur.edges.push_back(eidx);
        if (e.sequential) {
            cur.terminator = e.to;
            blocks.push_back(std::move(cur));
            cur = SequentialBlock{};
        }
    }
    if (!cur.edges.empty())
        blocks.push_back(std::move(cur));
    return blocks;
}

Expr active_condition(const EdgeGraph &graph, int edge_index) {
    return graph.edges[edge_index].condition;
}

Expr alive_condition(const FlatNetlist &net, int signal, Expr tracked_addr) {
    const SignalDecl &decl = net.signal(signal);
    if (!decl.is_clocked())
        throw InputError("alive-condition requested for non-clocked '" + decl.name + "'");
    Expr overwrite = e_false();
    for (const auto &a : net.assignments) {
        if (a.timing != Timing::Clocked || a.target.signal != signal)
            continue;
        Expr hit = a.condition;
        if (a.target.mem_addr) {
            if (!tracked_addr)
                throw InputError("memory alive-condition requires a tracked address");
            hit = b_and(hit, e_binop(ExprOp::Eq, a.target.mem_addr, tracked_addr));
        }
        if (!expr_equal(hit, overwrite))
            overwrite = b_or(overwrite, hit);
    }
    return b_not(overwrite);
}

namespace {

// Frozen-address variable for the memory a block ends in (or starts from).
Expr frozen_var(const FlatNetlist &net, int mem_signal, int block_index) {
    int depth = net.signal(mem_signal).depth;
    int bits = 1;
    while ((1 << bits) < depth)
        bits++;
    return e_aux("frz_b" + std::to_string(block_index), bits);
}

} // namespace

Seq build_sequence(const FlatNetlist &net, const EdgeGraph &graph,
                   const std::vector<SequentialBlock> &blocks) {
    Seq whole;
    // Frozen variable of the previous block's memory terminator, if any.
    Expr prev_frozen;
    int prev_terminator = -1;

    for (size_t b = 0; b < blocks.size(); b++) {
        const SequentialBlock &blk = blocks[b];
        bool ends_in_memory =
            blk.terminator >= 0 && net.signal(blk.terminator).kind == SignalKind::Memory;
        Expr block_frozen =
            ends_in_memory ? frozen_var(net, blk.terminator, static_cast<int>(b)) : nullptr;

        Seq block_seq;
        for (int eidx : blk.edges) {
            const AssignmentEdge &e = graph.edges[eidx];
            Expr cond = active_condition(graph, eidx);
            if (e.read_addr && e.from == prev_terminator && prev_frozen) {
                // reading the tracked word of the previous block's memory
                Expr addr = e.read_addr;
                int fw = prev_frozen->width;
                cond = b_and(cond, e_binop(ExprOp::Eq, addr, prev_frozen));
                (void)fw;
            }
            if (e.write_addr && block_frozen && e.to == blk.terminator) {
                // the write binds the frozen address of this block
                cond = b_and(cond, e_binop(ExprOp::Eq, e.write_addr, block_frozen));
            }
            if (is_const_true(cond))
                continue; // unconditional assignments do not shape the property
            Seq atom = s_atom(cond);
            block_seq = block_seq ? s_fuse(block_seq, atom) : atom;
        }
        if (!block_seq)
            block_seq = s_atom(e_true());

        whole = whole ? s_concat(whole, block_seq) : block_seq;
        bool is_last = b + 1 == blocks.size();
        if (!is_last && blk.terminator >= 0) {
            Expr alive = alive_condition(net, blk.terminator, block_frozen);
            whole = s_concat(whole, s_repinf(s_atom(alive)));
        }
        prev_frozen = block_frozen;
        prev_terminator = blk.terminator;
    }
    return whole;
}

Property path_cover_property(const FlatNetlist &net, const EdgeGraph &graph,
                             const LeakagePath &path) {
    Property p;
    p.kind = PropKind::Cover;
    p.body = build_sequence(net, graph, split_blocks(graph, path));
    p.origin = path.id;
    p.name = "cover_" + path.id;
    return p;
}

} // namespace leakcheck
