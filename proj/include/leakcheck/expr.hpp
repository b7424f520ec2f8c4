#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "leakcheck/diag.hpp"

namespace leakcheck {

// Word-level expression IR shared by the RTL frontend, the leakage-path
// conditions, the PSL boolean layer and the assumption generator.
// Widths are 1..64 bits; values are kept masked to their width.

enum class ExprOp {
    Const,
    Signal, // slice [hi:lo] of a declared signal
    Aux,    // free auxiliary variable (e.g. frozen memory addresses)
    MemRead,

    Not, // bitwise ~
    LogNot,
    RedOr, // |x, 1-bit

    And,
    Or,
    Xor,
    LogAnd,
    LogOr,

    Eq,
    Ne,
    Ult,
    Ule,
    Ugt,
    Uge,

    Add,
    Sub,
    Shl,
    Shr, // logical
    Sar, // arithmetic

    Mux, // args[0] ? args[1] : args[2], cond is 1-bit
    Concat, // args MSB-first
    Repl,
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprOp op = ExprOp::Const;
    int width = 1;

    uint64_t value = 0;        // Const
    int signal = -1;           // Signal, MemRead
    int hi = 0, lo = 0;        // Signal slice (absolute bit indices)
    std::string aux;           // Aux
    int repl_count = 0;        // Repl
    std::vector<Expr> args;
    SourceLoc loc;
};

uint64_t mask_width(uint64_t v, int width);

// Constructors. All return width-normalized nodes.
Expr e_const(uint64_t value, int width);
Expr e_true();
Expr e_false();
Expr e_signal(int signal, int hi, int lo);
Expr e_aux(const std::string &name, int width);
Expr e_mem_read(int signal, int word_width, Expr addr);
Expr e_not(Expr a);
Expr e_lognot(Expr a);
Expr e_redor(Expr a);
Expr e_binop(ExprOp op, Expr a, Expr b);
Expr e_mux(Expr cond, Expr a, Expr b);
Expr e_concat(std::vector<Expr> parts_msb_first);
Expr e_repl(int count, Expr part);

// Boolean helpers with constant folding; used for activation conditions so
// unconditional edges come out as exactly `true`.
bool is_const_true(const Expr &e);
bool is_const_false(const Expr &e);
Expr b_and(Expr a, Expr b);
Expr b_or(Expr a, Expr b);
Expr b_not(Expr a);
// (e != 0) as a 1-bit condition; 1-bit operands become (e == 1'b1).
Expr cond_true(Expr e);
// (e == 0)
Expr cond_false(Expr e);

bool expr_equal(const Expr &a, const Expr &b);
size_t expr_hash(const Expr &e);

// Signals referenced anywhere in the expression (including mem-read targets
// and addresses).
void collect_signals(const Expr &e, std::vector<int> &out);
bool references_aux(const Expr &e);

// Name/width source for printing and parsing.
class SymbolScope {
public:
    virtual ~SymbolScope() = default;
    virtual std::string signal_name(int signal) const = 0;
    virtual int signal_width(int signal) const = 0;
};

std::string print_expr(const Expr &e, const SymbolScope &scope);

// Evaluation over concrete values.
class EvalEnv {
public:
    virtual ~EvalEnv() = default;
    virtual uint64_t signal_value(int signal) const = 0;
    virtual uint64_t mem_word(int signal, uint64_t addr) const = 0;
    virtual uint64_t aux_value(const std::string &name) const; // throws by default
};

uint64_t eval_expr(const Expr &e, const EvalEnv &env);

// Constant folding; returns the same node when nothing folds.
Expr fold_expr(const Expr &e);

} // namespace leakcheck
