#include "leakcheck/seq.hpp"

namespace leakcheck {

Seq s_atom(Expr cond) {
    auto n = std::make_shared<SeqNode>();
    n->op = SeqOp::Atom;
    n->atom = std::move(cond);
    return n;
}

Seq s_fuse(Seq a, Seq b) {
    auto n = std::make_shared<SeqNode>();
    n->op = SeqOp::Fuse;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Seq s_concat(Seq a, Seq b) {
    auto n = std::make_shared<SeqNode>();
    n->op = SeqOp::Concat;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Seq s_repinf(Seq body) {
    if (body->op != SeqOp::Atom)
        throw InputError("repetition bodies must be plain Boolean atoms");
    auto n = std::make_shared<SeqNode>();
    n->op = SeqOp::RepInf;
    n->a = std::move(body);
    return n;
}

bool seq_equal(const Seq &a, const Seq &b) {
    if (!a || !b)
        return !a && !b;
    if (a->op != b->op)
        return false;
    if (a->op == SeqOp::Atom)
        return expr_equal(a->atom, b->atom);
    return seq_equal(a->a, b->a) && seq_equal(a->b, b->b);
}

int seq_node_count(const Seq &s) {
    if (!s)
        return 0;
    if (s->op == SeqOp::Atom)
        return 1;
    return 1 + seq_node_count(s->a) + seq_node_count(s->b);
}

bool property_equal(const Property &a, const Property &b) {
    return a.kind == b.kind && seq_equal(a.body, b.body);
}

} // namespace leakcheck
