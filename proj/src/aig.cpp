#include "leakcheck/aig.hpp"

#include <cassert>

namespace leakcheck {

AigLit Aig::mk_and(AigLit x, AigLit y) {
    if (x > y)
        std::swap(x, y);
    if (x == kAigFalse || x == aig_not(y))
        return kAigFalse;
    if (x == kAigTrue)
        return y;
    if (x == y)
        return x;
    uint64_t key = (static_cast<uint64_t>(x) << 32) | y;
    auto it = strash_.find(key);
    if (it != strash_.end())
        return it->second;
    Node n;
    n.a = x;
    n.b = y;
    nodes_.push_back(n);
    AigLit lit = static_cast<AigLit>((nodes_.size() - 1) << 1);
    strash_.emplace(key, lit);
    return lit;
}

BitVec bv_const(uint64_t value, int width) {
    BitVec v(width);
    for (int i = 0; i < width; i++)
        v[i] = ((value >> i) & 1) ? kAigTrue : kAigFalse;
    return v;
}

BitVec bv_inputs(Aig &g, int width) {
    BitVec v(width);
    for (int i = 0; i < width; i++)
        v[i] = g.new_input();
    return v;
}

AigLit bv_reduce_or(Aig &g, const BitVec &a) {
    AigLit acc = kAigFalse;
    for (AigLit x : a)
        acc = g.mk_or(acc, x);
    return acc;
}

AigLit bv_reduce_and(Aig &g, const BitVec &a) {
    AigLit acc = kAigTrue;
    for (AigLit x : a)
        acc = g.mk_and(acc, x);
    return acc;
}

BitVec bv_not(Aig &, const BitVec &a) {
    BitVec v(a.size());
    for (size_t i = 0; i < a.size(); i++)
        v[i] = aig_not(a[i]);
    return v;
}

#define BV_BITWISE(name, op)                                                                       \
    BitVec name(Aig &g, const BitVec &a, const BitVec &b) {                                        \
        assert(a.size() == b.size());                                                              \
        BitVec v(a.size());                                                                        \
        for (size_t i = 0; i < a.size(); i++)                                                      \
            v[i] = g.op(a[i], b[i]);                                                               \
        return v;                                                                                  \
    }

BV_BITWISE(bv_and, mk_and)
BV_BITWISE(bv_or, mk_or)
BV_BITWISE(bv_xor, mk_xor)
#undef BV_BITWISE

BitVec bv_add(Aig &g, const BitVec &a, const BitVec &b) {
    assert(a.size() == b.size());
    BitVec v(a.size());
    AigLit carry = kAigFalse;
    for (size_t i = 0; i < a.size(); i++) {
        AigLit s = g.mk_xor(a[i], b[i]);
        v[i] = g.mk_xor(s, carry);
        carry = g.mk_or(g.mk_and(a[i], b[i]), g.mk_and(s, carry));
    }
    return v;
}

BitVec bv_sub(Aig &g, const BitVec &a, const BitVec &b) {
    assert(a.size() == b.size());
    BitVec v(a.size());
    AigLit carry = kAigTrue; // a + ~b + 1
    for (size_t i = 0; i < a.size(); i++) {
        AigLit nb = aig_not(b[i]);
        AigLit s = g.mk_xor(a[i], nb);
        v[i] = g.mk_xor(s, carry);
        carry = g.mk_or(g.mk_and(a[i], nb), g.mk_and(s, carry));
    }
    return v;
}

AigLit bv_eq(Aig &g, const BitVec &a, const BitVec &b) {
    assert(a.size() == b.size());
    AigLit acc = kAigTrue;
    for (size_t i = 0; i < a.size(); i++)
        acc = g.mk_and(acc, g.mk_xnor(a[i], b[i]));
    return acc;
}

AigLit bv_ult(Aig &g, const BitVec &a, const BitVec &b) {
    assert(a.size() == b.size());
    AigLit lt = kAigFalse;
    for (size_t i = 0; i < a.size(); i++) {
        AigLit ai = a[i], bi = b[i];
        lt = g.mk_or(g.mk_and(aig_not(ai), bi), g.mk_and(g.mk_xnor(ai, bi), lt));
    }
    return lt;
}

AigLit bv_ule(Aig &g, const BitVec &a, const BitVec &b) { return aig_not(bv_ult(g, b, a)); }

BitVec bv_mux(Aig &g, AigLit sel, const BitVec &t, const BitVec &e) {
    assert(t.size() == e.size());
    BitVec v(t.size());
    for (size_t i = 0; i < t.size(); i++)
        v[i] = g.mk_mux(sel, t[i], e[i]);
    return v;
}

BitVec bv_zext(const BitVec &a, int width) {
    BitVec v = a;
    while (static_cast<int>(v.size()) < width)
        v.push_back(kAigFalse);
    return v;
}

BitVec bv_trunc(const BitVec &a, int width) {
    BitVec v = a;
    v.resize(width);
    return v;
}

BitVec bv_shl(Aig &g, const BitVec &a, const BitVec &amount) {
    BitVec cur = a;
    int w = static_cast<int>(a.size());
    for (size_t s = 0; s < amount.size(); s++) {
        int64_t shift = int64_t{1} << s;
        if (shift >= w) {
            // shifting by this much clears the word when the bit is set
            BitVec zero = bv_const(0, w);
            cur = bv_mux(g, amount[s], zero, cur);
            continue;
        }
        BitVec shifted(w);
        for (int i = 0; i < w; i++)
            shifted[i] = (i - shift >= 0) ? cur[i - shift] : kAigFalse;
        cur = bv_mux(g, amount[s], shifted, cur);
    }
    return cur;
}

BitVec bv_shr(Aig &g, const BitVec &a, const BitVec &amount, bool arith) {
    BitVec cur = a;
    int w = static_cast<int>(a.size());
    AigLit fill_bit = arith ? a[w - 1] : kAigFalse;
    for (size_t s = 0; s < amount.size(); s++) {
        int64_t shift = int64_t{1} << s;
        BitVec shifted(w);
        for (int i = 0; i < w; i++)
            shifted[i] = (i + shift < w) ? cur[i + shift] : fill_bit;
        cur = bv_mux(g, amount[s], shifted, cur);
    }
    return cur;
}

} // namespace leakcheck
