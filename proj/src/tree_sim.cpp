#include "leakcheck/tree_sim.hpp"

#include <functional>

#include "leakcheck/expr.hpp" // mask_width

namespace leakcheck {

struct TreeSim::Inst {
    std::string prefix;
    const AstModule *mod = nullptr;
    Inst *parent = nullptr;
    std::unordered_map<std::string, uint64_t> params;
    std::unordered_map<std::string, int> widths;
    std::unordered_map<std::string, uint64_t> vals;
    std::unordered_map<std::string, std::vector<uint64_t>> mems;
    std::vector<std::unique_ptr<Inst>> children;
    std::vector<const AstInstance *> child_decls;
};

struct TreeSim::Impl {
    const ModuleTree &tree;
    std::unique_ptr<Inst> root;
    std::unordered_map<std::string, std::pair<Inst *, std::string>> flat_index;
    int settle_budget = 0;

    explicit Impl(const ModuleTree &t) : tree(t) {}

    using Shadow = std::unordered_map<std::string, uint64_t>;

    // ---- construction ----

    std::unique_ptr<Inst> build(const AstModule &mod, const std::string &prefix, Inst *parent,
                                std::unordered_map<std::string, uint64_t> params) {
        auto inst = std::make_unique<Inst>();
        inst->prefix = prefix;
        inst->mod = &mod;
        inst->parent = parent;
        inst->params = std::move(params);
        for (const auto &p : mod.params)
            if (!inst->params.count(p.name))
                inst->params[p.name] = const_eval(p.value, *inst);

        auto range_width = [&](const AstRange &r) {
            if (!r.present)
                return 1;
            return static_cast<int>(const_eval(r.msb, *inst)) + 1;
        };
        for (const auto &p : mod.ports) {
            inst->widths[p.name] = range_width(p.range);
            inst->vals[p.name] = 0;
        }
        for (const auto &n : mod.nets) {
            inst->widths[n.name] = range_width(n.range);
            if (n.array.present) {
                size_t depth = static_cast<size_t>(const_eval(n.array.msb, *inst)) + 1;
                inst->mems[n.name].assign(depth, 0);
            } else {
                inst->vals[n.name] = 0;
            }
        }
        for (const auto &decl : mod.instances) {
            const AstModule *child = tree.find_module(decl.module_name);
            if (!child)
                throw InputError(decl.loc, "unresolved instance of '" + decl.module_name + "'");
            std::unordered_map<std::string, uint64_t> overrides;
            for (const auto &[pname, pexpr] : decl.params)
                overrides[pname] = const_eval(pexpr, *inst);
            inst->children.push_back(
                build(*child, prefix + decl.instance_name + ".", inst.get(), std::move(overrides)));
            inst->child_decls.push_back(&decl);
        }
        return inst;
    }

    void index(Inst *inst) {
        for (const auto &[name, v] : inst->vals)
            flat_index[inst->prefix + name] = {inst, name};
        for (const auto &[name, v] : inst->mems)
            flat_index[inst->prefix + name] = {inst, name};
        for (auto &c : inst->children)
            index(c.get());
        settle_budget += static_cast<int>(inst->mod->assigns.size()) +
                         static_cast<int>(inst->mod->instances.size()) * 4 + 4;
    }

    // ---- evaluation ----

    uint64_t const_eval(const AstExprPtr &e, const Inst &inst) {
        Shadow empty;
        return eval(e, inst, empty);
    }

    int width_of(const AstExprPtr &e, const Inst &inst) {
        switch (e->kind) {
        case AstExpr::Kind::Number:
            return e->number_width == 0 ? 32 : e->number_width;
        case AstExpr::Kind::Ident: {
            if (inst.params.count(e->ident))
                return 32;
            auto it = inst.widths.find(e->ident);
            if (it == inst.widths.end())
                throw InputError(e->loc, "undeclared signal '" + e->ident + "'");
            return it->second;
        }
        case AstExpr::Kind::Index:
            if (inst.mems.count(e->ident))
                return inst.widths.at(e->ident);
            return 1;
        case AstExpr::Kind::Range: {
            uint64_t hi = const_eval(e->args[0], inst);
            uint64_t lo = const_eval(e->args[1], inst);
            return static_cast<int>(hi - lo) + 1;
        }
        case AstExpr::Kind::Unary:
            return e->unop == AstUnOp::LogNot ? 1 : width_of(e->args[0], inst);
        case AstExpr::Kind::Binary:
            switch (e->binop) {
            case AstBinOp::LogAnd:
            case AstBinOp::LogOr:
            case AstBinOp::Eq:
            case AstBinOp::Ne:
            case AstBinOp::Lt:
            case AstBinOp::Le:
            case AstBinOp::Gt:
            case AstBinOp::Ge:
                return 1;
            case AstBinOp::Shl:
            case AstBinOp::Shr:
            case AstBinOp::Sar:
                return width_of(e->args[0], inst);
            default:
                return std::max(width_of(e->args[0], inst), width_of(e->args[1], inst));
            }
        case AstExpr::Kind::Ternary:
            return std::max(width_of(e->args[1], inst), width_of(e->args[2], inst));
        case AstExpr::Kind::Concat: {
            int w = 0;
            for (const auto &a : e->args)
                w += width_of(a, inst);
            return w;
        }
        case AstExpr::Kind::Repl: {
            uint64_t n = const_eval(e->args[0], inst);
            return static_cast<int>(n) * width_of(e->args[1], inst);
        }
        }
        return 1;
    }

    uint64_t eval(const AstExprPtr &e, const Inst &inst, const Shadow &shadow) {
        switch (e->kind) {
        case AstExpr::Kind::Number:
            return e->number;
        case AstExpr::Kind::Ident: {
            auto ps = inst.params.find(e->ident);
            if (ps != inst.params.end())
                return ps->second;
            auto sh = shadow.find(e->ident);
            if (sh != shadow.end())
                return sh->second;
            auto it = inst.vals.find(e->ident);
            if (it == inst.vals.end())
                throw InputError(e->loc, "undeclared signal '" + e->ident + "'");
            return it->second;
        }
        case AstExpr::Kind::Index: {
            auto mem = inst.mems.find(e->ident);
            if (mem != inst.mems.end()) {
                uint64_t addr = eval(e->args[0], inst, shadow);
                return addr < mem->second.size() ? mem->second[addr] : 0;
            }
            uint64_t bit = eval(e->args[0], inst, shadow);
            uint64_t v = eval_ident(e->ident, e->loc, inst, shadow);
            return (v >> bit) & 1;
        }
        case AstExpr::Kind::Range: {
            uint64_t hi = const_eval(e->args[0], inst);
            uint64_t lo = const_eval(e->args[1], inst);
            uint64_t v = eval_ident(e->ident, e->loc, inst, shadow);
            return mask_width(v >> lo, static_cast<int>(hi - lo) + 1);
        }
        case AstExpr::Kind::Unary: {
            uint64_t a = eval(e->args[0], inst, shadow);
            int w = width_of(e->args[0], inst);
            switch (e->unop) {
            case AstUnOp::BitNot: return mask_width(~a, w);
            case AstUnOp::LogNot: return a == 0 ? 1 : 0;
            case AstUnOp::Neg: return mask_width(0 - a, w);
            }
            return 0;
        }
        case AstExpr::Kind::Binary: {
            uint64_t a = eval(e->args[0], inst, shadow);
            uint64_t b = eval(e->args[1], inst, shadow);
            int w = width_of(e, inst);
            switch (e->binop) {
            case AstBinOp::And: return mask_width(a & b, w);
            case AstBinOp::Or: return mask_width(a | b, w);
            case AstBinOp::Xor: return mask_width(a ^ b, w);
            case AstBinOp::LogAnd: return (a != 0 && b != 0) ? 1 : 0;
            case AstBinOp::LogOr: return (a != 0 || b != 0) ? 1 : 0;
            case AstBinOp::Eq: return a == b ? 1 : 0;
            case AstBinOp::Ne: return a != b ? 1 : 0;
            case AstBinOp::Lt: return a < b ? 1 : 0;
            case AstBinOp::Le: return a <= b ? 1 : 0;
            case AstBinOp::Gt: return a > b ? 1 : 0;
            case AstBinOp::Ge: return a >= b ? 1 : 0;
            case AstBinOp::Shl: return b >= 64 ? 0 : mask_width(a << b, w);
            case AstBinOp::Shr: return b >= 64 ? 0 : mask_width(a >> b, w);
            case AstBinOp::Sar: {
                int aw = width_of(e->args[0], inst);
                uint64_t sign = (a >> (aw - 1)) & 1;
                if (b >= static_cast<uint64_t>(aw))
                    return sign ? mask_width(~uint64_t{0}, aw) : 0;
                uint64_t res = a >> b;
                if (sign)
                    res |= mask_width(~uint64_t{0} << (aw - b), aw);
                return mask_width(res, aw);
            }
            case AstBinOp::Add: return mask_width(a + b, w);
            case AstBinOp::Sub: return mask_width(a - b, w);
            }
            return 0;
        }
        case AstExpr::Kind::Ternary:
            return mask_width(eval(e->args[0], inst, shadow) != 0
                                  ? eval(e->args[1], inst, shadow)
                                  : eval(e->args[2], inst, shadow),
                              width_of(e, inst));
        case AstExpr::Kind::Concat: {
            uint64_t v = 0;
            for (const auto &a : e->args) {
                int w = width_of(a, inst);
                v = (v << w) | mask_width(eval(a, inst, shadow), w);
            }
            return v;
        }
        case AstExpr::Kind::Repl: {
            uint64_t n = const_eval(e->args[0], inst);
            int w = width_of(e->args[1], inst);
            uint64_t part = mask_width(eval(e->args[1], inst, shadow), w);
            uint64_t v = 0;
            for (uint64_t i = 0; i < n; i++)
                v = (v << w) | part;
            return v;
        }
        }
        return 0;
    }

    uint64_t eval_ident(const std::string &name, SourceLoc loc, const Inst &inst,
                        const Shadow &shadow) {
        auto sh = shadow.find(name);
        if (sh != shadow.end())
            return sh->second;
        auto it = inst.vals.find(name);
        if (it == inst.vals.end())
            throw InputError(loc, "undeclared signal '" + name + "'");
        return it->second;
    }

    // ---- stores ----

    bool store(Inst &inst, const AstExprPtr &lhs, uint64_t v, const Shadow &shadow) {
        if (lhs->kind == AstExpr::Kind::Ident) {
            int w = inst.widths.at(lhs->ident);
            uint64_t nv = mask_width(v, w);
            uint64_t &slot = inst.vals.at(lhs->ident);
            bool changed = slot != nv;
            slot = nv;
            return changed;
        }
        if (lhs->kind == AstExpr::Kind::Index) {
            auto mem = inst.mems.find(lhs->ident);
            if (mem != inst.mems.end()) {
                uint64_t addr = eval(lhs->args[0], inst, shadow);
                if (addr >= mem->second.size())
                    return false;
                uint64_t nv = mask_width(v, inst.widths.at(lhs->ident));
                bool changed = mem->second[addr] != nv;
                mem->second[addr] = nv;
                return changed;
            }
            uint64_t bit = eval(lhs->args[0], inst, shadow);
            uint64_t &slot = inst.vals.at(lhs->ident);
            uint64_t nv = (slot & ~(uint64_t{1} << bit)) | ((v & 1) << bit);
            bool changed = slot != nv;
            slot = nv;
            return changed;
        }
        if (lhs->kind == AstExpr::Kind::Range) {
            uint64_t hi = const_eval(lhs->args[0], inst);
            uint64_t lo = const_eval(lhs->args[1], inst);
            int fw = static_cast<int>(hi - lo) + 1;
            uint64_t field = mask_width(v, fw);
            uint64_t &slot = inst.vals.at(lhs->ident);
            uint64_t keep = ~(mask_width(~uint64_t{0}, fw) << lo);
            uint64_t nv = mask_width((slot & keep) | (field << lo), inst.widths.at(lhs->ident));
            bool changed = slot != nv;
            slot = nv;
            return changed;
        }
        throw InputError(lhs->loc, "bad assignment target");
    }

    // ---- settling ----

    bool settle_pass(Inst &inst) {
        bool changed = false;
        Shadow empty;
        for (const auto &a : inst.mod->assigns)
            changed |= store(inst, a.lhs, eval(a.rhs, inst, empty), empty);
        for (size_t i = 0; i < inst.children.size(); i++) {
            Inst &child = *inst.children[i];
            const AstInstance &decl = *inst.child_decls[i];
            bool positional = !decl.conns.empty() && decl.conns.front().first.empty();
            for (size_t c = 0; c < decl.conns.size(); c++) {
                const auto &[cname, cexpr] = decl.conns[c];
                const AstPort *port = nullptr;
                if (positional) {
                    port = &child.mod->ports[c];
                } else {
                    for (const auto &p : child.mod->ports)
                        if (p.name == cname)
                            port = &p;
                }
                if (!port)
                    throw InputError(decl.loc, "unknown port '" + cname + "'");
                if (port->is_input) {
                    uint64_t v = mask_width(eval(cexpr, inst, empty), child.widths.at(port->name));
                    uint64_t &slot = child.vals.at(port->name);
                    changed |= slot != v;
                    slot = v;
                } else {
                    uint64_t v = child.vals.at(port->name);
                    changed |= store(inst, cexpr, v, empty);
                }
            }
            changed |= settle_pass(child);
        }
        return changed;
    }

    void settle() {
        for (int pass = 0; pass < settle_budget + 8; pass++) {
            if (!settle_pass(*root))
                return;
        }
        throw InputError("combinational relaxation did not settle");
    }

    // ---- clocked execution ----

    // Nonblocking update with the target fully resolved at execution time.
    struct StagedReg {
        Inst *inst;
        std::string name;
        bool is_mem = false;
        uint64_t addr = 0;
        int hi = 0, lo = 0;
        uint64_t value = 0;
    };

    StagedReg resolve_nb(Inst &inst, const AstExprPtr &lhs, uint64_t v, const Shadow &shadow) {
        StagedReg u;
        u.inst = &inst;
        u.name = lhs->ident;
        if (lhs->kind == AstExpr::Kind::Ident) {
            u.hi = inst.widths.at(lhs->ident) - 1;
            u.lo = 0;
        } else if (lhs->kind == AstExpr::Kind::Index) {
            if (inst.mems.count(lhs->ident)) {
                u.is_mem = true;
                u.addr = eval(lhs->args[0], inst, shadow);
                u.hi = inst.widths.at(lhs->ident) - 1;
                u.lo = 0;
            } else {
                u.hi = u.lo = static_cast<int>(eval(lhs->args[0], inst, shadow));
            }
        } else if (lhs->kind == AstExpr::Kind::Range) {
            u.hi = static_cast<int>(const_eval(lhs->args[0], inst));
            u.lo = static_cast<int>(const_eval(lhs->args[1], inst));
        } else {
            throw InputError(lhs->loc, "bad assignment target");
        }
        u.value = mask_width(v, u.hi - u.lo + 1);
        return u;
    }

    void apply_nb(const StagedReg &u) {
        if (u.is_mem) {
            auto &words = u.inst->mems.at(u.name);
            if (u.addr < words.size())
                words[u.addr] = u.value;
            return;
        }
        uint64_t &slot = u.inst->vals.at(u.name);
        int w = u.inst->widths.at(u.name);
        uint64_t keep = ~(mask_width(~uint64_t{0}, u.hi - u.lo + 1) << u.lo);
        slot = mask_width((slot & keep) | (u.value << u.lo), w);
    }

    void exec_stmt(const AstStmtPtr &s, Inst &inst, Shadow &shadow,
                   std::vector<StagedReg> &staged) {
        switch (s->kind) {
        case AstStmt::Kind::Block:
            for (const auto &c : s->stmts)
                exec_stmt(c, inst, shadow, staged);
            return;
        case AstStmt::Kind::If:
            if (eval(s->cond, inst, shadow) != 0)
                exec_stmt(s->then_stmt, inst, shadow, staged);
            else if (s->else_stmt)
                exec_stmt(s->else_stmt, inst, shadow, staged);
            return;
        case AstStmt::Kind::Case: {
            uint64_t sel = eval(s->case_expr, inst, shadow);
            const AstStmt::CaseArm *hit = nullptr;
            const AstStmt::CaseArm *def = nullptr;
            for (const auto &arm : s->arms) {
                if (arm.labels.empty()) {
                    def = &arm;
                    continue;
                }
                for (const auto &label : arm.labels)
                    if (const_eval(label, inst) == sel && !hit)
                        hit = &arm;
            }
            if (!hit)
                hit = def;
            if (hit)
                exec_stmt(hit->body, inst, shadow, staged);
            return;
        }
        case AstStmt::Kind::Assign: {
            uint64_t v = eval(s->rhs, inst, shadow);
            if (s->nonblocking) {
                staged.push_back(resolve_nb(inst, s->lhs, v, shadow));
            } else {
                shadow[s->lhs->ident] = mask_width(v, inst.widths.at(s->lhs->ident));
            }
            return;
        }
        }
    }

    void clock_inst(Inst &inst, std::vector<StagedReg> &staged,
                    std::vector<std::pair<Inst *, Shadow>> &blocking_commits) {
        for (const auto &blk : inst.mod->always_blocks) {
            Shadow shadow;
            exec_stmt(blk.body, inst, shadow, staged);
            if (!shadow.empty())
                blocking_commits.emplace_back(&inst, std::move(shadow));
        }
        for (auto &c : inst.children)
            clock_inst(*c, staged, blocking_commits);
    }

    void clock_edge() {
        std::vector<StagedReg> staged;
        std::vector<std::pair<Inst *, Shadow>> blocking_commits;
        clock_inst(*root, staged, blocking_commits);
        for (auto &[inst, shadow] : blocking_commits)
            for (const auto &[name, v] : shadow)
                inst->vals.at(name) = v;
        for (auto &u : staged)
            apply_nb(u);
        settle();
    }
};

TreeSim::TreeSim(const ModuleTree &tree, const std::string &top) : impl_(new Impl(tree)) {
    const AstModule *mod = top.empty() ? tree.top_module() : tree.find_module(top);
    if (!mod)
        throw InputError("top module '" + top + "' not found");
    impl_->root = impl_->build(*mod, mod->name + ".", nullptr, {});
    impl_->index(impl_->root.get());
}

TreeSim::~TreeSim() = default;

void TreeSim::set_input(const std::string &flat_name, uint64_t v) {
    auto it = impl_->flat_index.find(flat_name);
    if (it == impl_->flat_index.end())
        throw InputError("unknown signal '" + flat_name + "'");
    auto &[inst, local] = it->second;
    inst->vals.at(local) = mask_width(v, inst->widths.at(local));
}

uint64_t TreeSim::value(const std::string &flat_name) const {
    auto it = impl_->flat_index.find(flat_name);
    if (it == impl_->flat_index.end())
        throw InputError("unknown signal '" + flat_name + "'");
    const auto &[inst, local] = it->second;
    return inst->vals.at(local);
}

void TreeSim::settle() { impl_->settle(); }
void TreeSim::clock_edge() { impl_->clock_edge(); }

std::vector<std::pair<std::string, uint64_t>> TreeSim::all_values() const {
    std::vector<std::pair<std::string, uint64_t>> out;
    for (const auto &[name, loc] : impl_->flat_index)
        if (loc.first->vals.count(loc.second))
            out.emplace_back(name, loc.first->vals.at(loc.second));
    return out;
}

std::vector<std::pair<std::string, std::vector<uint64_t>>> TreeSim::all_memories() const {
    std::vector<std::pair<std::string, std::vector<uint64_t>>> out;
    for (const auto &[name, loc] : impl_->flat_index)
        if (loc.first->mems.count(loc.second))
            out.emplace_back(name, loc.first->mems.at(loc.second));
    return out;
}

} // namespace leakcheck
