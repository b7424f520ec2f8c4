#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace leakcheck {

// And-inverter graph with complement edges and structural hashing.
// Literal encoding: 2*node + sign; node 0 is constant false.
using AigLit = uint32_t;

constexpr AigLit kAigFalse = 0;
constexpr AigLit kAigTrue = 1;

inline AigLit aig_not(AigLit x) { return x ^ 1; }
inline uint32_t aig_node(AigLit x) { return x >> 1; }
inline bool aig_sign(AigLit x) { return x & 1; }

class Aig {
public:
    struct Node {
        AigLit a = 0, b = 0;
        bool input = false;
    };

    Aig() { nodes_.push_back(Node{}); }

    AigLit new_input() {
        Node n;
        n.input = true;
        nodes_.push_back(n);
        return static_cast<AigLit>((nodes_.size() - 1) << 1);
    }

    AigLit mk_and(AigLit x, AigLit y);
    AigLit mk_or(AigLit x, AigLit y) { return aig_not(mk_and(aig_not(x), aig_not(y))); }
    AigLit mk_xor(AigLit x, AigLit y) {
        return mk_or(mk_and(x, aig_not(y)), mk_and(aig_not(x), y));
    }
    AigLit mk_xnor(AigLit x, AigLit y) { return aig_not(mk_xor(x, y)); }
    AigLit mk_mux(AigLit s, AigLit t, AigLit e) {
        return mk_or(mk_and(s, t), mk_and(aig_not(s), e));
    }
    AigLit mk_implies(AigLit x, AigLit y) { return mk_or(aig_not(x), y); }

    size_t num_nodes() const { return nodes_.size(); }
    const Node &node(uint32_t idx) const { return nodes_[idx]; }
    bool is_input(uint32_t idx) const { return nodes_[idx].input; }
    bool is_and(uint32_t idx) const { return idx != 0 && !nodes_[idx].input; }

private:
    std::vector<Node> nodes_;
    std::unordered_map<uint64_t, AigLit> strash_;
};

// Word of AIG literals, LSB first.
using BitVec = std::vector<AigLit>;

BitVec bv_const(uint64_t value, int width);
BitVec bv_inputs(Aig &g, int width);
AigLit bv_reduce_or(Aig &g, const BitVec &a);
AigLit bv_reduce_and(Aig &g, const BitVec &a);
BitVec bv_not(Aig &g, const BitVec &a);
BitVec bv_and(Aig &g, const BitVec &a, const BitVec &b);
BitVec bv_or(Aig &g, const BitVec &a, const BitVec &b);
BitVec bv_xor(Aig &g, const BitVec &a, const BitVec &b);
BitVec bv_add(Aig &g, const BitVec &a, const BitVec &b);
BitVec bv_sub(Aig &g, const BitVec &a, const BitVec &b);
AigLit bv_eq(Aig &g, const BitVec &a, const BitVec &b);
AigLit bv_ult(Aig &g, const BitVec &a, const BitVec &b);
AigLit bv_ule(Aig &g, const BitVec &a, const BitVec &b);
BitVec bv_mux(Aig &g, AigLit sel, const BitVec &t, const BitVec &e);
BitVec bv_zext(const BitVec &a, int width);
BitVec bv_trunc(const BitVec &a, int width);
// Shifts by a variable amount (barrel); fill with zero or the sign bit.
BitVec bv_shl(Aig &g, const BitVec &a, const BitVec &amount);
BitVec bv_shr(Aig &g, const BitVec &a, const BitVec &amount, bool arith);

} // namespace leakcheck
