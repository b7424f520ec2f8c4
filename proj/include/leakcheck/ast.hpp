#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "leakcheck/diag.hpp"

namespace leakcheck {

// Syntax tree for the supported RTL subset. Hierarchy is preserved here;
// elaboration flattens it into a FlatNetlist.

enum class AstUnOp { BitNot, LogNot, Neg };
enum class AstBinOp {
    And,
    Or,
    Xor,
    LogAnd,
    LogOr,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Shl,
    Shr,
    Sar,
    Add,
    Sub,
};

struct AstExpr;
using AstExprPtr = std::shared_ptr<AstExpr>;

struct AstExpr {
    enum class Kind {
        Number,
        Ident,
        Index,  // base[idx]: bit select or memory word read
        Range,  // base[msb:lsb]
        Unary,
        Binary,
        Ternary,
        Concat,
        Repl,
    };

    Kind kind = Kind::Number;
    SourceLoc loc;

    uint64_t number = 0;
    int number_width = 0; // 0 = unsized decimal
    std::string ident;    // Ident; also base name for Index/Range
    AstUnOp unop = AstUnOp::BitNot;
    AstBinOp binop = AstBinOp::And;
    int repl_count_unused = 0;
    std::vector<AstExprPtr> args;
    // Index: args[0] = index expr.
    // Range: args[0] = msb expr, args[1] = lsb expr.
    // Unary: args[0]. Binary: args[0], args[1]. Ternary: cond, then, else.
    // Concat: parts MSB-first. Repl: args[0] = count expr, args[1] = part.
};

struct AstStmt;
using AstStmtPtr = std::shared_ptr<AstStmt>;

struct AstStmt {
    enum class Kind { Block, If, Case, Assign };

    Kind kind = Kind::Block;
    SourceLoc loc;

    std::vector<AstStmtPtr> stmts; // Block

    AstExprPtr cond; // If
    AstStmtPtr then_stmt;
    AstStmtPtr else_stmt; // may be null

    AstExprPtr case_expr; // Case
    struct CaseArm {
        std::vector<AstExprPtr> labels; // empty = default
        AstStmtPtr body;
        SourceLoc loc;
    };
    std::vector<CaseArm> arms;

    AstExprPtr lhs; // Assign: Ident / Index / Range
    AstExprPtr rhs;
    bool nonblocking = false;
};

struct AstRange {
    // [msb:lsb]; both constant after parameter substitution.
    AstExprPtr msb;
    AstExprPtr lsb;
    bool present = false;
};

struct AstPort {
    std::string name;
    bool is_input = true;
    bool is_reg = false;
    AstRange range;
    SourceLoc loc;
};

struct AstNet {
    std::string name;
    bool is_reg = false;
    AstRange range;
    AstRange array; // memory word index range, present for memories
    SourceLoc loc;
};

struct AstParam {
    std::string name;
    AstExprPtr value;
    SourceLoc loc;
};

struct AstAssign {
    AstExprPtr lhs;
    AstExprPtr rhs;
    SourceLoc loc;
};

struct AstAlways {
    std::string clock;
    AstStmtPtr body;
    SourceLoc loc;
};

struct AstInstance {
    std::string module_name;
    std::string instance_name;
    std::vector<std::pair<std::string, AstExprPtr>> params; // named overrides
    std::vector<std::pair<std::string, AstExprPtr>> conns;  // named; name empty = positional
    SourceLoc loc;
};

struct AstModule {
    std::string name;
    std::vector<AstPort> ports;
    std::vector<AstParam> params;
    std::vector<AstNet> nets;
    std::vector<AstAssign> assigns;
    std::vector<AstAlways> always_blocks;
    std::vector<AstInstance> instances;
    SourceLoc loc;
};

struct ModuleTree {
    std::vector<AstModule> modules;

    const AstModule *find_module(const std::string &name) const;
    // The unique module not instantiated by any other; errors if ambiguous.
    const AstModule *top_module() const;
};

bool ast_expr_equal(const AstExprPtr &a, const AstExprPtr &b);
bool ast_stmt_equal(const AstStmtPtr &a, const AstStmtPtr &b);
bool module_tree_equal(const ModuleTree &a, const ModuleTree &b);

std::string pretty_print(const ModuleTree &tree);
std::string pretty_print_expr(const AstExprPtr &e);

} // namespace leakcheck
