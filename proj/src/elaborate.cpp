#include "leakcheck/elaborate.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace leakcheck {

namespace {

struct Scope {
    std::string prefix; // includes trailing '.'
    const AstModule *mod = nullptr;
    std::unordered_map<std::string, uint64_t> params;
};

struct PendingWrite {
    LValue target;
    Expr rhs;
    Expr guard;
    SourceLoc loc;
    // control path: (decision id, arm index) per enclosing if/case
    std::vector<std::pair<int, int>> ctl;
};

// Writes from diverging arms of the same decision can never fire together.
bool writes_exclusive(const PendingWrite &a, const PendingWrite &b) {
    size_t n = std::min(a.ctl.size(), b.ctl.size());
    for (size_t i = 0; i < n; i++) {
        if (a.ctl[i] != b.ctl[i]) {
            return a.ctl[i].first == b.ctl[i].first && a.ctl[i].second != b.ctl[i].second;
        }
    }
    return false; // one path prefixes the other: both can fire
}

class Elaborator {
public:
    Elaborator(const ModuleTree &tree, const ElabOptions &opts) : tree_(tree), opts_(opts) {}

    FlatNetlist run() {
        const AstModule *top =
            opts_.top.empty() ? tree_.top_module() : tree_.find_module(opts_.top);
        if (!top)
            throw InputError("top module '" + opts_.top + "' not found");
        Scope scope;
        scope.prefix = top->name + ".";
        scope.mod = top;
        declare_module(scope, /*is_top=*/true);
        elaborate_module(scope, {top->name});
        finish_checks(*top, scope);
        net_.validate();
        net_.comb_topo_order(); // throws on combinational cycles
        return std::move(net_);
    }

private:
    const ModuleTree &tree_;
    const ElabOptions &opts_;
    FlatNetlist net_;
    int order_counter_ = 0;
    int decision_counter_ = 0;
    std::vector<int> clock_candidates_;

    // ---- declarations ----

    int const_width(const AstRange &range, const Scope &scope) {
        if (!range.present)
            return 1;
        uint64_t msb = const_eval(range.msb, scope);
        uint64_t lsb = const_eval(range.lsb, scope);
        if (lsb != 0)
            throw InputError(range.msb->loc, "ranges must be [msb:0]");
        if (msb > 63)
            throw InputError(range.msb->loc, "widths above 64 bits are not supported");
        return static_cast<int>(msb) + 1;
    }

    void declare_module(Scope &scope, bool is_top) {
        const AstModule &mod = *scope.mod;
        // Parameters without overrides get their default values.
        for (const auto &p : mod.params)
            if (!scope.params.count(p.name))
                scope.params[p.name] = const_eval(p.value, scope);

        // Targets assigned under a clock edge decide register/memory kinds.
        std::unordered_set<std::string> clocked_targets;
        for (const auto &blk : mod.always_blocks)
            collect_targets(blk.body, clocked_targets);

        for (const auto &port : mod.ports) {
            if (port.is_reg)
                throw InputError(port.loc,
                                 "unsupported construct 'output reg' (drive ports with assign)");
            SignalDecl d;
            d.name = scope.prefix + port.name;
            d.width = const_width(port.range, scope);
            d.kind = is_top ? (port.is_input ? SignalKind::InputPort : SignalKind::OutputPort)
                            : SignalKind::Wire;
            d.loc = port.loc;
            net_.add_signal(d);
        }
        for (const auto &n : mod.nets) {
            SignalDecl d;
            d.name = scope.prefix + n.name;
            d.width = const_width(n.range, scope);
            d.loc = n.loc;
            if (n.array.present) {
                uint64_t hi = const_eval(n.array.msb, scope);
                uint64_t lo = const_eval(n.array.lsb, scope);
                if (hi < lo)
                    std::swap(hi, lo);
                if (lo != 0)
                    throw InputError(n.loc, "memory word ranges must start at 0");
                d.kind = SignalKind::Memory;
                d.depth = static_cast<int>(hi) + 1;
                if (!clocked_targets.count(n.name))
                    throw InputError(n.loc, "memory '" + n.name + "' is never written");
            } else if (n.is_reg) {
                if (!clocked_targets.count(n.name))
                    throw InputError(n.loc, "reg '" + n.name +
                                                "' is never assigned in a clocked block");
                d.kind = SignalKind::Register;
            } else {
                d.kind = SignalKind::Wire;
            }
            net_.add_signal(d);
        }
    }

    void collect_targets(const AstStmtPtr &s, std::unordered_set<std::string> &out) {
        if (!s)
            return;
        switch (s->kind) {
        case AstStmt::Kind::Block:
            for (const auto &c : s->stmts)
                collect_targets(c, out);
            break;
        case AstStmt::Kind::If:
            collect_targets(s->then_stmt, out);
            collect_targets(s->else_stmt, out);
            break;
        case AstStmt::Kind::Case:
            for (const auto &arm : s->arms)
                collect_targets(arm.body, out);
            break;
        case AstStmt::Kind::Assign:
            out.insert(s->lhs->ident);
            break;
        }
    }

    // ---- expressions ----

    uint64_t const_eval(const AstExprPtr &e, const Scope &scope) {
        Expr ir = elaborate_expr(e, scope);
        Expr folded = fold_expr(ir);
        if (folded->op != ExprOp::Const)
            throw InputError(e->loc, "expression must be constant here");
        return folded->value;
    }

    int lookup_signal(const std::string &name, const Scope &scope, SourceLoc loc) {
        int id = net_.find_signal(scope.prefix + name);
        if (id < 0)
            throw InputError(loc, "undeclared signal '" + name + "'");
        return id;
    }

    Expr elaborate_expr(const AstExprPtr &e, const Scope &scope) {
        switch (e->kind) {
        case AstExpr::Kind::Number:
            return e_const(e->number, e->number_width == 0 ? 32 : e->number_width);
        case AstExpr::Kind::Ident: {
            auto it = scope.params.find(e->ident);
            if (it != scope.params.end())
                return e_const(it->second, 32);
            int id = lookup_signal(e->ident, scope, e->loc);
            return e_signal(id, net_.signal(id).width - 1, 0);
        }
        case AstExpr::Kind::Index: {
            int id = lookup_signal(e->ident, scope, e->loc);
            const SignalDecl &d = net_.signal(id);
            if (d.kind == SignalKind::Memory)
                return e_mem_read(id, d.width, elaborate_expr(e->args[0], scope));
            uint64_t bit = const_eval(e->args[0], scope);
            if (bit >= static_cast<uint64_t>(d.width))
                throw InputError(e->loc, "bit select out of range on '" + e->ident + "'");
            return e_signal(id, static_cast<int>(bit), static_cast<int>(bit));
        }
        case AstExpr::Kind::Range: {
            int id = lookup_signal(e->ident, scope, e->loc);
            const SignalDecl &d = net_.signal(id);
            if (d.kind == SignalKind::Memory)
                throw InputError(e->loc, "part select on memory '" + e->ident + "'");
            uint64_t hi = const_eval(e->args[0], scope);
            uint64_t lo = const_eval(e->args[1], scope);
            if (hi < lo || hi >= static_cast<uint64_t>(d.width))
                throw InputError(e->loc, "part select out of range on '" + e->ident + "'");
            return e_signal(id, static_cast<int>(hi), static_cast<int>(lo));
        }
        case AstExpr::Kind::Unary: {
            Expr a = elaborate_expr(e->args[0], scope);
            switch (e->unop) {
            case AstUnOp::BitNot: return e_not(a);
            case AstUnOp::LogNot: return cond_false(a);
            case AstUnOp::Neg: return e_binop(ExprOp::Sub, e_const(0, a->width), a);
            }
            break;
        }
        case AstExpr::Kind::Binary: {
            Expr a = elaborate_expr(e->args[0], scope);
            Expr b = elaborate_expr(e->args[1], scope);
            switch (e->binop) {
            case AstBinOp::And: return e_binop(ExprOp::And, a, b);
            case AstBinOp::Or: return e_binop(ExprOp::Or, a, b);
            case AstBinOp::Xor: return e_binop(ExprOp::Xor, a, b);
            case AstBinOp::LogAnd: return e_binop(ExprOp::LogAnd, a, b);
            case AstBinOp::LogOr: return e_binop(ExprOp::LogOr, a, b);
            case AstBinOp::Eq: return e_binop(ExprOp::Eq, a, b);
            case AstBinOp::Ne: return e_binop(ExprOp::Ne, a, b);
            case AstBinOp::Lt: return e_binop(ExprOp::Ult, a, b);
            case AstBinOp::Le: return e_binop(ExprOp::Ule, a, b);
            case AstBinOp::Gt: return e_binop(ExprOp::Ugt, a, b);
            case AstBinOp::Ge: return e_binop(ExprOp::Uge, a, b);
            case AstBinOp::Shl: return e_binop(ExprOp::Shl, a, b);
            case AstBinOp::Shr: return e_binop(ExprOp::Shr, a, b);
            case AstBinOp::Sar: return e_binop(ExprOp::Sar, a, b);
            case AstBinOp::Add: return e_binop(ExprOp::Add, a, b);
            case AstBinOp::Sub: return e_binop(ExprOp::Sub, a, b);
            }
            break;
        }
        case AstExpr::Kind::Ternary: {
            Expr c = elaborate_expr(e->args[0], scope);
            if (c->width != 1)
                c = e_redor(c);
            return e_mux(c, elaborate_expr(e->args[1], scope), elaborate_expr(e->args[2], scope));
        }
        case AstExpr::Kind::Concat: {
            std::vector<Expr> parts;
            int total = 0;
            for (const auto &a : e->args) {
                parts.push_back(elaborate_expr(a, scope));
                total += parts.back()->width;
            }
            if (total > 64)
                throw InputError(e->loc, "concatenation wider than 64 bits");
            return e_concat(std::move(parts));
        }
        case AstExpr::Kind::Repl: {
            uint64_t count = const_eval(e->args[0], scope);
            Expr part = elaborate_expr(e->args[1], scope);
            if (count < 1 || count * part->width > 64)
                throw InputError(e->loc, "replication out of supported range");
            return e_repl(static_cast<int>(count), part);
        }
        }
        throw InputError(e->loc, "unhandled expression");
    }

    LValue elaborate_lvalue(const AstExprPtr &e, const Scope &scope) {
        LValue lv;
        switch (e->kind) {
        case AstExpr::Kind::Ident: {
            lv.signal = lookup_signal(e->ident, scope, e->loc);
            const SignalDecl &d = net_.signal(lv.signal);
            if (d.kind == SignalKind::Memory)
                throw InputError(e->loc, "memory '" + e->ident + "' assigned without word index");
            lv.hi = d.width - 1;
            lv.lo = 0;
            return lv;
        }
        case AstExpr::Kind::Index: {
            lv.signal = lookup_signal(e->ident, scope, e->loc);
            const SignalDecl &d = net_.signal(lv.signal);
            if (d.kind == SignalKind::Memory) {
                lv.hi = d.width - 1;
                lv.lo = 0;
                lv.mem_addr = elaborate_expr(e->args[0], scope);
                return lv;
            }
            uint64_t bit = const_eval(e->args[0], scope);
            if (bit >= static_cast<uint64_t>(d.width))
                throw InputError(e->loc, "bit select out of range on '" + e->ident + "'");
            lv.hi = lv.lo = static_cast<int>(bit);
            return lv;
        }
        case AstExpr::Kind::Range: {
            lv.signal = lookup_signal(e->ident, scope, e->loc);
            const SignalDecl &d = net_.signal(lv.signal);
            if (d.kind == SignalKind::Memory)
                throw InputError(e->loc, "part select on memory '" + e->ident + "'");
            uint64_t hi = const_eval(e->args[0], scope);
            uint64_t lo = const_eval(e->args[1], scope);
            if (hi < lo || hi >= static_cast<uint64_t>(d.width))
                throw InputError(e->loc, "part select out of range on '" + e->ident + "'");
            lv.hi = static_cast<int>(hi);
            lv.lo = static_cast<int>(lo);
            return lv;
        }
        default:
            throw InputError(e->loc, "assignment target must be a signal, bit or part select");
        }
    }

    // ---- module bodies ----

    void elaborate_module(Scope &scope, std::vector<std::string> inst_stack) {
        const AstModule &mod = *scope.mod;

        for (const auto &a : mod.assigns)
            add_comb_assignment(elaborate_lvalue(a.lhs, scope), elaborate_expr(a.rhs, scope),
                                a.loc);

        for (const auto &blk : mod.always_blocks)
            elaborate_always(blk, scope);

        for (const auto &inst : mod.instances)
            elaborate_instance(inst, scope, inst_stack);
    }

    void add_comb_assignment(LValue target, Expr source, SourceLoc loc) {
        Assignment a;
        a.id = static_cast<int>(net_.assignments.size());
        a.target = target;
        a.source = resize(std::move(source), target.hi - target.lo + 1);
        a.condition = e_true();
        a.timing = Timing::Combinational;
        a.order_index = order_counter_++;
        a.loc = loc;
        net_.assignments.push_back(std::move(a));
    }

    // Zero-extends or truncates to the target width, Verilog assignment style.
    Expr resize(Expr e, int width) {
        if (e->width == width)
            return e;
        if (e->op == ExprOp::Const)
            return e_const(e->value, width);
        if (e->width > width) {
            // truncate via shift-free masking: keep low bits
            if (e->op == ExprOp::Signal)
                return e_signal(e->signal, e->lo + width - 1, e->lo);
            return e_binop(ExprOp::And, std::move(e), e_const(mask_width(~uint64_t{0}, width),
                                                              width));
        }
        // widen with a zero-const OR, which adopts the larger width
        return e_binop(ExprOp::Or, std::move(e), e_const(0, width));
    }

    void elaborate_always(const AstAlways &blk, const Scope &scope) {
        int clk = lookup_signal(blk.clock, scope, blk.loc);
        clock_candidates_.push_back(clk);

        std::vector<PendingWrite> writes;
        std::unordered_map<int, Expr> blocking_env;
        std::vector<std::pair<int, int>> ctl;
        flatten_stmt(blk.body, e_true(), scope, blocking_env, writes, ctl);

        // Later writes take priority: conjoin each guard with the negation of
        // every later overlapping write so the final set is mutually
        // exclusive. Writes from diverging branches already are.
        for (size_t i = 0; i < writes.size(); i++) {
            Expr guard = writes[i].guard;
            for (size_t j = i + 1; j < writes.size(); j++) {
                if (writes[j].target.signal != writes[i].target.signal)
                    continue;
                if (writes_exclusive(writes[i], writes[j]))
                    continue;
                if (writes[i].target.mem_addr) {
                    Expr same_word = e_binop(ExprOp::Eq, writes[i].target.mem_addr,
                                             writes[j].target.mem_addr);
                    guard = b_and(guard, b_not(b_and(writes[j].guard, same_word)));
                } else {
                    bool overlap = !(writes[j].target.lo > writes[i].target.hi ||
                                     writes[j].target.hi < writes[i].target.lo);
                    if (overlap)
                        guard = b_and(guard, b_not(writes[j].guard));
                }
            }
            Assignment a;
            a.id = static_cast<int>(net_.assignments.size());
            a.target = writes[i].target;
            a.source = resize(writes[i].rhs, writes[i].target.hi - writes[i].target.lo + 1);
            a.condition = guard;
            a.timing = Timing::Clocked;
            a.order_index = order_counter_++;
            a.loc = writes[i].loc;
            net_.assignments.push_back(std::move(a));
        }
    }

    void flatten_stmt(const AstStmtPtr &s, Expr guard, const Scope &scope,
                      std::unordered_map<int, Expr> &blocking_env,
                      std::vector<PendingWrite> &writes,
                      std::vector<std::pair<int, int>> &ctl) {
        switch (s->kind) {
        case AstStmt::Kind::Block:
            for (const auto &c : s->stmts)
                flatten_stmt(c, guard, scope, blocking_env, writes, ctl);
            return;
        case AstStmt::Kind::If: {
            Expr c = cond_true(elaborate_with_env(s->cond, scope, blocking_env));
            Expr g_then = b_and(guard, c);
            Expr g_else = b_and(guard, b_not(c));
            net_.sibling_conditions.push_back({g_then, g_else, s->loc});
            int decision = decision_counter_++;
            auto env_then = blocking_env;
            ctl.push_back({decision, 0});
            flatten_stmt(s->then_stmt, g_then, scope, env_then, writes, ctl);
            ctl.back().second = 1;
            auto env_else = blocking_env;
            if (s->else_stmt)
                flatten_stmt(s->else_stmt, g_else, scope, env_else, writes, ctl);
            ctl.pop_back();
            merge_envs(c, env_then, env_else, blocking_env);
            return;
        }
        case AstStmt::Kind::Case: {
            Expr sel = elaborate_with_env(s->case_expr, scope, blocking_env);
            std::vector<Expr> arm_conds;
            Expr not_any = e_true();
            bool has_default = false;
            for (const auto &arm : s->arms) {
                if (arm.labels.empty()) {
                    has_default = true;
                    arm_conds.push_back(Expr()); // filled after loop
                    continue;
                }
                Expr c = e_false();
                for (const auto &label : arm.labels) {
                    uint64_t v = const_eval(label, scope);
                    c = b_or(c, e_binop(ExprOp::Eq, sel, e_const(v, sel->width)));
                }
                arm_conds.push_back(c);
                not_any = b_and(not_any, b_not(c));
            }
            for (size_t i = 0; i < s->arms.size(); i++)
                if (!arm_conds[i])
                    arm_conds[i] = not_any;
            (void)has_default;
            for (size_t i = 0; i < s->arms.size(); i++)
                for (size_t j = i + 1; j < s->arms.size(); j++)
                    net_.sibling_conditions.push_back(
                        {b_and(guard, arm_conds[i]), b_and(guard, arm_conds[j]), s->loc});
            std::vector<std::unordered_map<int, Expr>> arm_envs;
            int decision = decision_counter_++;
            for (size_t i = 0; i < s->arms.size(); i++) {
                arm_envs.push_back(blocking_env);
                ctl.push_back({decision, static_cast<int>(i)});
                flatten_stmt(s->arms[i].body, b_and(guard, arm_conds[i]), scope, arm_envs.back(),
                             writes, ctl);
                ctl.pop_back();
            }
            for (size_t i = 0; i < s->arms.size(); i++) {
                auto merged = blocking_env;
                merge_envs(arm_conds[i], arm_envs[i], blocking_env, merged);
                blocking_env = std::move(merged);
            }
            return;
        }
        case AstStmt::Kind::Assign: {
            PendingWrite w;
            w.target = elaborate_lvalue(s->lhs, scope);
            if (w.target.mem_addr) {
                // memory address may reference blocking-updated values
                w.target.mem_addr = substitute_env(w.target.mem_addr, blocking_env);
                if (!s->nonblocking)
                    throw InputError(s->loc, "blocking writes to memories are unsupported");
            }
            w.rhs = elaborate_with_env(s->rhs, scope, blocking_env);
            w.guard = guard;
            w.loc = s->loc;
            w.ctl = ctl;
            if (!s->nonblocking) {
                const SignalDecl &d = net_.signal(w.target.signal);
                if (w.target.lo != 0 || w.target.hi != d.width - 1)
                    throw InputError(s->loc,
                                     "blocking assignments must cover the whole signal");
                blocking_env[w.target.signal] = w.rhs;
            }
            writes.push_back(std::move(w));
            return;
        }
        }
    }

    // cond ? taken-branch value : other value, per blocking-assigned signal.
    void merge_envs(const Expr &cond, const std::unordered_map<int, Expr> &env_taken,
                    const std::unordered_map<int, Expr> &env_other,
                    std::unordered_map<int, Expr> &out) {
        std::unordered_set<int> keys;
        for (const auto &[k, v] : env_taken)
            keys.insert(k);
        for (const auto &[k, v] : env_other)
            keys.insert(k);
        for (int k : keys) {
            auto old_value = [&]() {
                const SignalDecl &d = net_.signal(k);
                return e_signal(k, d.width - 1, 0);
            };
            auto it_t = env_taken.find(k);
            auto it_o = env_other.find(k);
            Expr vt = it_t != env_taken.end() ? it_t->second : old_value();
            Expr vo = it_o != env_other.end() ? it_o->second : old_value();
            if (expr_equal(vt, vo))
                out[k] = vt;
            else
                out[k] = e_mux(cond, vt, vo);
        }
    }

    Expr elaborate_with_env(const AstExprPtr &e, const Scope &scope,
                            const std::unordered_map<int, Expr> &env) {
        return substitute_env(elaborate_expr(e, scope), env);
    }

    Expr substitute_env(const Expr &e, const std::unordered_map<int, Expr> &env) {
        if (env.empty())
            return e;
        std::function<Expr(const Expr &)> rec = [&](const Expr &n) -> Expr {
            if (n->op == ExprOp::Signal) {
                auto it = env.find(n->signal);
                if (it != env.end()) {
                    const SignalDecl &d = net_.signal(n->signal);
                    if (n->lo != 0 || n->hi != d.width - 1)
                        throw InputError(n->loc,
                                         "slice read of a blocking-assigned value is unsupported");
                    return it->second;
                }
                return n;
            }
            bool changed = false;
            std::vector<Expr> args;
            args.reserve(n->args.size());
            for (const auto &a : n->args) {
                Expr r = rec(a);
                changed |= r.get() != a.get();
                args.push_back(std::move(r));
            }
            if (!changed)
                return n;
            ExprNode copy = *n;
            copy.args = std::move(args);
            return std::make_shared<const ExprNode>(std::move(copy));
        };
        return rec(e);
    }

    // ---- instances ----

    void elaborate_instance(const AstInstance &inst, const Scope &parent,
                            std::vector<std::string> inst_stack) {
        const AstModule *child = tree_.find_module(inst.module_name);
        if (!child)
            throw InputError(inst.loc, "unresolved instance of '" + inst.module_name + "'");
        if (std::find(inst_stack.begin(), inst_stack.end(), inst.module_name) != inst_stack.end())
            throw InputError(inst.loc, "recursive instantiation of '" + inst.module_name + "'");
        if (inst_stack.size() > 16)
            throw InputError(inst.loc, "instance hierarchy too deep");

        Scope scope;
        scope.prefix = parent.prefix + inst.instance_name + ".";
        scope.mod = child;
        for (const auto &[pname, pexpr] : inst.params) {
            bool known = false;
            for (const auto &p : child->params)
                known |= p.name == pname;
            if (!known)
                throw InputError(inst.loc, "unknown parameter '" + pname + "'");
            scope.params[pname] = const_eval(pexpr, parent);
        }
        declare_module(scope, /*is_top=*/false);

        // Resolve connections to the port list.
        std::unordered_map<std::string, const AstExprPtr *> by_name;
        bool positional = !inst.conns.empty() && inst.conns.front().first.empty();
        if (positional) {
            if (inst.conns.size() != child->ports.size())
                throw InputError(inst.loc, "positional connection count mismatch");
        }
        for (const auto &[cname, cexpr] : inst.conns) {
            if (positional != cname.empty())
                throw InputError(inst.loc, "mixed positional and named connections");
            if (!cname.empty())
                by_name[cname] = &cexpr;
        }

        for (size_t i = 0; i < child->ports.size(); i++) {
            const AstPort &port = child->ports[i];
            const AstExprPtr *conn = nullptr;
            if (positional) {
                conn = &inst.conns[i].second;
            } else {
                auto it = by_name.find(port.name);
                if (it != by_name.end())
                    conn = it->second;
            }
            int port_sig = net_.require_signal(scope.prefix + port.name);
            int port_width = net_.signal(port_sig).width;
            if (!conn) {
                if (port.is_input)
                    throw InputError(inst.loc, "input port '" + port.name + "' unconnected");
                continue; // dangling output is allowed
            }
            if (port.is_input) {
                Expr src = elaborate_expr(*conn, parent);
                if (src->op == ExprOp::Const)
                    src = e_const(src->value, port_width);
                else if (src->width != port_width)
                    throw InputError((*conn)->loc, "width mismatch on port '" + port.name + "'");
                LValue lv;
                lv.signal = port_sig;
                lv.hi = port_width - 1;
                lv.lo = 0;
                add_comb_assignment(lv, src, inst.loc);
            } else {
                LValue lv = elaborate_lvalue(*conn, parent);
                if (lv.hi - lv.lo + 1 != port_width)
                    throw InputError((*conn)->loc, "width mismatch on port '" + port.name + "'");
                add_comb_assignment(lv, e_signal(port_sig, port_width - 1, 0), inst.loc);
            }
        }

        inst_stack.push_back(inst.module_name);
        elaborate_module(scope, inst_stack);
    }

    // ---- final checks ----

    // Follows single-driver identity assignments to the root signal.
    int resolve_alias(int sig) const {
        for (int steps = 0; steps < 64; steps++) {
            const Assignment *driver = nullptr;
            int count = 0;
            for (const auto &a : net_.assignments) {
                if (a.target.signal == sig && !a.target.mem_addr) {
                    count++;
                    driver = &a;
                }
            }
            if (count != 1)
                return sig;
            if (driver->timing != Timing::Combinational)
                return sig;
            const Expr &src = driver->source;
            if (src->op != ExprOp::Signal)
                return sig;
            const SignalDecl &d = net_.signal(src->signal);
            if (src->lo != 0 || src->hi != d.width - 1)
                return sig;
            sig = src->signal;
        }
        return sig;
    }

    void finish_checks(const AstModule &top, const Scope &top_scope) {
        // Single clock domain.
        if (!clock_candidates_.empty()) {
            int root = resolve_alias(clock_candidates_[0]);
            for (int c : clock_candidates_) {
                if (resolve_alias(c) != root)
                    throw InputError(net_.signal(c).loc,
                                     "multiple clock domains: '" + net_.signal(root).name +
                                         "' vs '" + net_.signal(c).name + "'");
            }
            net_.clock = root;
            if (net_.signal(root).kind != SignalKind::InputPort)
                throw InputError(net_.signal(root).loc, "clock must be a top-level input");
        }

        if (!opts_.reset_name.empty()) {
            net_.reset = net_.require_signal(opts_.reset_name);
            net_.reset_active_high = opts_.reset_active_high;
        }

        // Multiple combinational drivers on overlapping bits.
        std::vector<std::vector<const Assignment *>> comb(net_.signals.size());
        for (const auto &a : net_.assignments)
            if (a.timing == Timing::Combinational)
                comb[a.target.signal].push_back(&a);
        for (const auto &list : comb) {
            for (size_t i = 0; i < list.size(); i++)
                for (size_t j = i + 1; j < list.size(); j++) {
                    bool overlap = !(list[j]->target.lo > list[i]->target.hi ||
                                     list[j]->target.hi < list[i]->target.lo);
                    if (overlap)
                        throw InputError(list[j]->loc,
                                         "multiple drivers on '" +
                                             net_.signal(list[i]->target.signal).name + "'");
                }
        }

        // Output ports must be driven (unless declared unused) and wires need
        // drivers when read.
        std::unordered_set<std::string> unused(opts_.unused_outputs.begin(),
                                               opts_.unused_outputs.end());
        for (const auto &port : top.ports) {
            if (port.is_input)
                continue;
            std::string flat = top_scope.prefix + port.name;
            int sig = net_.require_signal(flat);
            bool driven = false;
            for (const auto &a : net_.assignments)
                driven |= a.target.signal == sig;
            if (!driven && !unused.count(flat) && !unused.count(port.name))
                throw InputError(port.loc, "output port '" + flat +
                                               "' is never assigned (declare it unused)");
        }
    }
};

} // namespace

FlatNetlist elaborate(const ModuleTree &tree, const ElabOptions &opts) {
    Elaborator e(tree, opts);
    return e.run();
}

} // namespace leakcheck
