#include "leakcheck/ast.hpp"

#include <sstream>
#include <unordered_set>

namespace leakcheck {

const AstModule *ModuleTree::find_module(const std::string &name) const {
    for (const auto &m : modules)
        if (m.name == name)
            return &m;
    return nullptr;
}

const AstModule *ModuleTree::top_module() const {
    std::unordered_set<std::string> instantiated;
    for (const auto &m : modules)
        for (const auto &inst : m.instances)
            instantiated.insert(inst.module_name);
    const AstModule *top = nullptr;
    for (const auto &m : modules) {
        if (instantiated.count(m.name))
            continue;
        if (top)
            throw InputError(m.loc, "multiple top-level module candidates: '" + top->name +
                                        "' and '" + m.name + "'");
        top = &m;
    }
    if (!top)
        throw InputError("no top-level module (instantiation cycle?)");
    return top;
}

// ---- structural equality (ignores source locations) ----

bool ast_expr_equal(const AstExprPtr &a, const AstExprPtr &b) {
    if (!a || !b)
        return !a && !b;
    if (a->kind != b->kind)
        return false;
    if (a->number != b->number || a->number_width != b->number_width)
        return false;
    if (a->ident != b->ident || a->unop != b->unop || a->binop != b->binop)
        return false;
    if (a->args.size() != b->args.size())
        return false;
    for (size_t i = 0; i < a->args.size(); i++)
        if (!ast_expr_equal(a->args[i], b->args[i]))
            return false;
    return true;
}

bool ast_stmt_equal(const AstStmtPtr &a, const AstStmtPtr &b) {
    if (!a || !b)
        return !a && !b;
    if (a->kind != b->kind)
        return false;
    if (a->stmts.size() != b->stmts.size())
        return false;
    for (size_t i = 0; i < a->stmts.size(); i++)
        if (!ast_stmt_equal(a->stmts[i], b->stmts[i]))
            return false;
    if (!ast_expr_equal(a->cond, b->cond) || !ast_stmt_equal(a->then_stmt, b->then_stmt) ||
        !ast_stmt_equal(a->else_stmt, b->else_stmt))
        return false;
    if (!ast_expr_equal(a->case_expr, b->case_expr) || a->arms.size() != b->arms.size())
        return false;
    for (size_t i = 0; i < a->arms.size(); i++) {
        const auto &x = a->arms[i];
        const auto &y = b->arms[i];
        if (x.labels.size() != y.labels.size())
            return false;
        for (size_t j = 0; j < x.labels.size(); j++)
            if (!ast_expr_equal(x.labels[j], y.labels[j]))
                return false;
        if (!ast_stmt_equal(x.body, y.body))
            return false;
    }
    return ast_expr_equal(a->lhs, b->lhs) && ast_expr_equal(a->rhs, b->rhs) &&
           a->nonblocking == b->nonblocking;
}

namespace {

bool range_equal(const AstRange &a, const AstRange &b) {
    return a.present == b.present && ast_expr_equal(a.msb, b.msb) && ast_expr_equal(a.lsb, b.lsb);
}

bool module_equal(const AstModule &a, const AstModule &b) {
    if (a.name != b.name || a.ports.size() != b.ports.size() || a.params.size() != b.params.size() ||
        a.nets.size() != b.nets.size() || a.assigns.size() != b.assigns.size() ||
        a.always_blocks.size() != b.always_blocks.size() || a.instances.size() != b.instances.size())
        return false;
    for (size_t i = 0; i < a.ports.size(); i++) {
        const auto &x = a.ports[i];
        const auto &y = b.ports[i];
        if (x.name != y.name || x.is_input != y.is_input || x.is_reg != y.is_reg ||
            !range_equal(x.range, y.range))
            return false;
    }
    for (size_t i = 0; i < a.params.size(); i++)
        if (a.params[i].name != b.params[i].name ||
            !ast_expr_equal(a.params[i].value, b.params[i].value))
            return false;
    for (size_t i = 0; i < a.nets.size(); i++) {
        const auto &x = a.nets[i];
        const auto &y = b.nets[i];
        if (x.name != y.name || x.is_reg != y.is_reg || !range_equal(x.range, y.range) ||
            !range_equal(x.array, y.array))
            return false;
    }
    for (size_t i = 0; i < a.assigns.size(); i++)
        if (!ast_expr_equal(a.assigns[i].lhs, b.assigns[i].lhs) ||
            !ast_expr_equal(a.assigns[i].rhs, b.assigns[i].rhs))
            return false;
    for (size_t i = 0; i < a.always_blocks.size(); i++)
        if (a.always_blocks[i].clock != b.always_blocks[i].clock ||
            !ast_stmt_equal(a.always_blocks[i].body, b.always_blocks[i].body))
            return false;
    for (size_t i = 0; i < a.instances.size(); i++) {
        const auto &x = a.instances[i];
        const auto &y = b.instances[i];
        if (x.module_name != y.module_name || x.instance_name != y.instance_name ||
            x.params.size() != y.params.size() || x.conns.size() != y.conns.size())
            return false;
        for (size_t j = 0; j < x.params.size(); j++)
            if (x.params[j].first != y.params[j].first ||
                !ast_expr_equal(x.params[j].second, y.params[j].second))
                return false;
        for (size_t j = 0; j < x.conns.size(); j++)
            if (x.conns[j].first != y.conns[j].first ||
                !ast_expr_equal(x.conns[j].second, y.conns[j].second))
                return false;
    }
    return true;
}

} // namespace

bool module_tree_equal(const ModuleTree &a, const ModuleTree &b) {
    if (a.modules.size() != b.modules.size())
        return false;
    for (size_t i = 0; i < a.modules.size(); i++)
        if (!module_equal(a.modules[i], b.modules[i]))
            return false;
    return true;
}

// ---- pretty printer ----

namespace {

const char *binop_text(AstBinOp op) {
    switch (op) {
    case AstBinOp::And: return "&";
    case AstBinOp::Or: return "|";
    case AstBinOp::Xor: return "^";
    case AstBinOp::LogAnd: return "&&";
    case AstBinOp::LogOr: return "||";
    case AstBinOp::Eq: return "==";
    case AstBinOp::Ne: return "!=";
    case AstBinOp::Lt: return "<";
    case AstBinOp::Le: return "<=";
    case AstBinOp::Gt: return ">";
    case AstBinOp::Ge: return ">=";
    case AstBinOp::Shl: return "<<";
    case AstBinOp::Shr: return ">>";
    case AstBinOp::Sar: return ">>>";
    case AstBinOp::Add: return "+";
    case AstBinOp::Sub: return "-";
    }
    return "?";
}

void print_expr(std::ostream &os, const AstExprPtr &e) {
    switch (e->kind) {
    case AstExpr::Kind::Number:
        if (e->number_width == 0)
            os << e->number;
        else
            os << e->number_width << "'h" << std::hex << e->number << std::dec;
        break;
    case AstExpr::Kind::Ident:
        os << e->ident;
        break;
    case AstExpr::Kind::Index:
        os << e->ident << "[";
        print_expr(os, e->args[0]);
        os << "]";
        break;
    case AstExpr::Kind::Range:
        os << e->ident << "[";
        print_expr(os, e->args[0]);
        os << ":";
        print_expr(os, e->args[1]);
        os << "]";
        break;
    case AstExpr::Kind::Unary:
        os << (e->unop == AstUnOp::BitNot ? "~" : e->unop == AstUnOp::LogNot ? "!" : "-");
        os << "(";
        print_expr(os, e->args[0]);
        os << ")";
        break;
    case AstExpr::Kind::Binary:
        os << "(";
        print_expr(os, e->args[0]);
        os << " " << binop_text(e->binop) << " ";
        print_expr(os, e->args[1]);
        os << ")";
        break;
    case AstExpr::Kind::Ternary:
        os << "(";
        print_expr(os, e->args[0]);
        os << " ? ";
        print_expr(os, e->args[1]);
        os << " : ";
        print_expr(os, e->args[2]);
        os << ")";
        break;
    case AstExpr::Kind::Concat:
        os << "{";
        for (size_t i = 0; i < e->args.size(); i++) {
            if (i)
                os << ", ";
            print_expr(os, e->args[i]);
        }
        os << "}";
        break;
    case AstExpr::Kind::Repl:
        os << "{";
        print_expr(os, e->args[0]);
        os << "{";
        print_expr(os, e->args[1]);
        os << "}}";
        break;
    }
}

void print_range(std::ostream &os, const AstRange &r) {
    if (!r.present)
        return;
    os << "[";
    print_expr(os, r.msb);
    os << ":";
    print_expr(os, r.lsb);
    os << "] ";
}

void print_stmt(std::ostream &os, const AstStmtPtr &s, int indent) {
    std::string pad(indent * 2, ' ');
    switch (s->kind) {
    case AstStmt::Kind::Block:
        os << pad << "begin\n";
        for (const auto &c : s->stmts)
            print_stmt(os, c, indent + 1);
        os << pad << "end\n";
        break;
    case AstStmt::Kind::If:
        os << pad << "if (";
        print_expr(os, s->cond);
        os << ")\n";
        print_stmt(os, s->then_stmt, indent + 1);
        if (s->else_stmt) {
            os << pad << "else\n";
            print_stmt(os, s->else_stmt, indent + 1);
        }
        break;
    case AstStmt::Kind::Case:
        os << pad << "case (";
        print_expr(os, s->case_expr);
        os << ")\n";
        for (const auto &arm : s->arms) {
            os << pad << "  ";
            if (arm.labels.empty()) {
                os << "default";
            } else {
                for (size_t i = 0; i < arm.labels.size(); i++) {
                    if (i)
                        os << ", ";
                    print_expr(os, arm.labels[i]);
                }
            }
            os << ":\n";
            print_stmt(os, arm.body, indent + 2);
        }
        os << pad << "endcase\n";
        break;
    case AstStmt::Kind::Assign:
        os << pad;
        print_expr(os, s->lhs);
        os << (s->nonblocking ? " <= " : " = ");
        print_expr(os, s->rhs);
        os << ";\n";
        break;
    }
}

} // namespace

std::string pretty_print_expr(const AstExprPtr &e) {
    std::ostringstream os;
    print_expr(os, e);
    return os.str();
}

std::string pretty_print(const ModuleTree &tree) {
    std::ostringstream os;
    for (const auto &m : tree.modules) {
        os << "module " << m.name << "(";
        for (size_t i = 0; i < m.ports.size(); i++) {
            const auto &p = m.ports[i];
            if (i)
                os << ", ";
            os << (p.is_input ? "input " : "output ");
            if (p.is_reg)
                os << "reg ";
            print_range(os, p.range);
            os << p.name;
        }
        os << ");\n";
        for (const auto &p : m.params) {
            os << "  parameter " << p.name << " = ";
            print_expr(os, p.value);
            os << ";\n";
        }
        for (const auto &n : m.nets) {
            os << "  " << (n.is_reg ? "reg " : "wire ");
            print_range(os, n.range);
            os << n.name;
            if (n.array.present) {
                os << " [";
                print_expr(os, n.array.msb);
                os << ":";
                print_expr(os, n.array.lsb);
                os << "]";
            }
            os << ";\n";
        }
        for (const auto &inst : m.instances) {
            os << "  " << inst.module_name << " ";
            if (!inst.params.empty()) {
                os << "#(";
                for (size_t i = 0; i < inst.params.size(); i++) {
                    if (i)
                        os << ", ";
                    os << "." << inst.params[i].first << "(";
                    print_expr(os, inst.params[i].second);
                    os << ")";
                }
                os << ") ";
            }
            os << inst.instance_name << "(";
            for (size_t i = 0; i < inst.conns.size(); i++) {
                if (i)
                    os << ", ";
                if (!inst.conns[i].first.empty()) {
                    os << "." << inst.conns[i].first << "(";
                    print_expr(os, inst.conns[i].second);
                    os << ")";
                } else {
                    print_expr(os, inst.conns[i].second);
                }
            }
            os << ");\n";
        }
        for (const auto &a : m.assigns) {
            os << "  assign ";
            print_expr(os, a.lhs);
            os << " = ";
            print_expr(os, a.rhs);
            os << ";\n";
        }
        for (const auto &blk : m.always_blocks) {
            os << "  always @(posedge " << blk.clock << ")\n";
            print_stmt(os, blk.body, 2);
        }
        os << "endmodule\n\n";
    }
    return os.str();
}

} // namespace leakcheck
