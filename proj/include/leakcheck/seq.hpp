#pragma once

#include <memory>
#include <string>

#include "leakcheck/expr.hpp"

namespace leakcheck {

// SERE AST over Boolean activation atoms. Repetition bodies are restricted
// to atoms (alive-conditions), which keeps matching and monitor synthesis
// simple and matches the generated property shapes.
enum class SeqOp { Atom, Fuse, Concat, RepInf };

struct SeqNode;
using Seq = std::shared_ptr<const SeqNode>;

struct SeqNode {
    SeqOp op = SeqOp::Atom;
    Expr atom;  // Atom
    Seq a, b;   // Fuse/Concat: both; RepInf: a only
};

Seq s_atom(Expr cond);
Seq s_fuse(Seq a, Seq b);
Seq s_concat(Seq a, Seq b);
Seq s_repinf(Seq body); // body must be an Atom

bool seq_equal(const Seq &a, const Seq &b);
int seq_node_count(const Seq &s);

enum class PropKind { Cover, Assume };

struct Property {
    PropKind kind = PropKind::Cover;
    Seq body;
    std::string name;   // stable identifier
    std::string origin; // path id or assumption-mode id
};

bool property_equal(const Property &a, const Property &b);

} // namespace leakcheck
