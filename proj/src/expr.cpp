#include "leakcheck/expr.hpp"

#include <cassert>
#include <sstream>

namespace leakcheck {

uint64_t mask_width(uint64_t v, int width) {
    assert(width >= 1 && width <= 64);
    if (width >= 64)
        return v;
    return v & ((uint64_t{1} << width) - 1);
}

namespace {

Expr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

} // namespace

Expr e_const(uint64_t value, int width) {
    ExprNode n;
    n.op = ExprOp::Const;
    n.width = width;
    n.value = mask_width(value, width);
    return make(std::move(n));
}

Expr e_true() { return e_const(1, 1); }
Expr e_false() { return e_const(0, 1); }

Expr e_signal(int signal, int hi, int lo) {
    assert(hi >= lo && lo >= 0);
    ExprNode n;
    n.op = ExprOp::Signal;
    n.signal = signal;
    n.hi = hi;
    n.lo = lo;
    n.width = hi - lo + 1;
    return make(std::move(n));
}

Expr e_aux(const std::string &name, int width) {
    ExprNode n;
    n.op = ExprOp::Aux;
    n.aux = name;
    n.width = width;
    return make(std::move(n));
}

Expr e_mem_read(int signal, int word_width, Expr addr) {
    ExprNode n;
    n.op = ExprOp::MemRead;
    n.signal = signal;
    n.width = word_width;
    n.args = {std::move(addr)};
    return make(std::move(n));
}

Expr e_not(Expr a) {
    ExprNode n;
    n.op = ExprOp::Not;
    n.width = a->width;
    n.args = {std::move(a)};
    return make(std::move(n));
}

Expr e_lognot(Expr a) {
    ExprNode n;
    n.op = ExprOp::LogNot;
    n.width = 1;
    n.args = {std::move(a)};
    return make(std::move(n));
}

Expr e_redor(Expr a) {
    ExprNode n;
    n.op = ExprOp::RedOr;
    n.width = 1;
    n.args = {std::move(a)};
    return make(std::move(n));
}

Expr e_binop(ExprOp op, Expr a, Expr b) {
    ExprNode n;
    n.op = op;
    switch (op) {
    case ExprOp::And:
    case ExprOp::Or:
    case ExprOp::Xor:
    case ExprOp::Add:
    case ExprOp::Sub:
        n.width = std::max(a->width, b->width);
        break;
    case ExprOp::Shl:
    case ExprOp::Shr:
    case ExprOp::Sar:
        n.width = a->width;
        break;
    case ExprOp::LogAnd:
    case ExprOp::LogOr:
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Ult:
    case ExprOp::Ule:
    case ExprOp::Ugt:
    case ExprOp::Uge:
        n.width = 1;
        break;
    default:
        assert(false && "not a binop");
    }
    n.args = {std::move(a), std::move(b)};
    return make(std::move(n));
}

Expr e_mux(Expr cond, Expr a, Expr b) {
    assert(cond->width == 1);
    ExprNode n;
    n.op = ExprOp::Mux;
    n.width = std::max(a->width, b->width);
    n.args = {std::move(cond), std::move(a), std::move(b)};
    return make(std::move(n));
}

Expr e_concat(std::vector<Expr> parts_msb_first) {
    assert(!parts_msb_first.empty());
    if (parts_msb_first.size() == 1)
        return parts_msb_first[0];
    int w = 0;
    for (const auto &p : parts_msb_first)
        w += p->width;
    assert(w <= 64);
    ExprNode n;
    n.op = ExprOp::Concat;
    n.width = w;
    n.args = std::move(parts_msb_first);
    return make(std::move(n));
}

Expr e_repl(int count, Expr part) {
    assert(count >= 1 && count * part->width <= 64);
    ExprNode n;
    n.op = ExprOp::Repl;
    n.repl_count = count;
    n.width = count * part->width;
    n.args = {std::move(part)};
    return make(std::move(n));
}

bool is_const_true(const Expr &e) {
    return e->op == ExprOp::Const && e->width == 1 && e->value == 1;
}

bool is_const_false(const Expr &e) {
    return e->op == ExprOp::Const && e->width == 1 && e->value == 0;
}

Expr b_and(Expr a, Expr b) {
    if (is_const_true(a))
        return b;
    if (is_const_true(b))
        return a;
    if (is_const_false(a) || is_const_false(b))
        return e_false();
    return e_binop(ExprOp::LogAnd, std::move(a), std::move(b));
}

Expr b_or(Expr a, Expr b) {
    if (is_const_false(a))
        return b;
    if (is_const_false(b))
        return a;
    if (is_const_true(a) || is_const_true(b))
        return e_true();
    return e_binop(ExprOp::LogOr, std::move(a), std::move(b));
}

Expr b_not(Expr a) {
    if (is_const_true(a))
        return e_false();
    if (is_const_false(a))
        return e_true();
    return e_lognot(std::move(a));
}

Expr cond_true(Expr e) {
    if (e->op == ExprOp::Const)
        return e->value != 0 ? e_true() : e_false();
    if (e->width == 1)
        return e_binop(ExprOp::Eq, std::move(e), e_const(1, 1));
    int w = e->width;
    return e_binop(ExprOp::Ne, std::move(e), e_const(0, w));
}

Expr cond_false(Expr e) {
    if (e->op == ExprOp::Const)
        return e->value == 0 ? e_true() : e_false();
    int w = e->width;
    return e_binop(ExprOp::Eq, std::move(e), e_const(0, w));
}

bool expr_equal(const Expr &a, const Expr &b) {
    if (a.get() == b.get())
        return true;
    if (!a || !b)
        return false;
    if (a->op != b->op || a->width != b->width)
        return false;
    if (a->value != b->value || a->signal != b->signal || a->hi != b->hi || a->lo != b->lo ||
        a->aux != b->aux || a->repl_count != b->repl_count)
        return false;
    if (a->args.size() != b->args.size())
        return false;
    for (size_t i = 0; i < a->args.size(); i++)
        if (!expr_equal(a->args[i], b->args[i]))
            return false;
    return true;
}

size_t expr_hash(const Expr &e) {
    if (!e)
        return 0;
    size_t h = static_cast<size_t>(e->op) * 0x9e3779b97f4a7c15ull;
    auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    mix(static_cast<size_t>(e->width));
    mix(static_cast<size_t>(e->value));
    mix(static_cast<size_t>(e->signal + 1));
    mix(static_cast<size_t>(e->hi));
    mix(static_cast<size_t>(e->lo));
    mix(std::hash<std::string>{}(e->aux));
    mix(static_cast<size_t>(e->repl_count));
    for (const auto &a : e->args)
        mix(expr_hash(a));
    return h;
}

void collect_signals(const Expr &e, std::vector<int> &out) {
    if (!e)
        return;
    if (e->op == ExprOp::Signal || e->op == ExprOp::MemRead)
        out.push_back(e->signal);
    for (const auto &a : e->args)
        collect_signals(a, out);
}

bool references_aux(const Expr &e) {
    if (!e)
        return false;
    if (e->op == ExprOp::Aux)
        return true;
    for (const auto &a : e->args)
        if (references_aux(a))
            return true;
    return false;
}

namespace {

std::string const_text(uint64_t value, int width) {
    std::ostringstream os;
    if (width == 1) {
        os << "1'b" << value;
    } else {
        os << width << "'h" << std::hex << value;
    }
    return os.str();
}

const char *binop_text(ExprOp op) {
    switch (op) {
    case ExprOp::And: return "&";
    case ExprOp::Or: return "|";
    case ExprOp::Xor: return "^";
    case ExprOp::LogAnd: return "&&";
    case ExprOp::LogOr: return "||";
    case ExprOp::Eq: return "==";
    case ExprOp::Ne: return "!=";
    case ExprOp::Ult: return "<";
    case ExprOp::Ule: return "<=";
    case ExprOp::Ugt: return ">";
    case ExprOp::Uge: return ">=";
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Shl: return "<<";
    case ExprOp::Shr: return ">>";
    case ExprOp::Sar: return ">>>";
    default: return "?";
    }
}

} // namespace

std::string print_expr(const Expr &e, const SymbolScope &scope) {
    std::ostringstream os;
    switch (e->op) {
    case ExprOp::Const:
        os << const_text(e->value, e->width);
        break;
    case ExprOp::Signal: {
        os << scope.signal_name(e->signal);
        int declared = scope.signal_width(e->signal);
        if (!(e->lo == 0 && e->hi == declared - 1)) {
            if (e->hi == e->lo)
                os << "[" << e->lo << "]";
            else
                os << "[" << e->hi << ":" << e->lo << "]";
        }
        break;
    }
    case ExprOp::Aux:
        os << e->aux;
        break;
    case ExprOp::MemRead:
        os << scope.signal_name(e->signal) << "[" << print_expr(e->args[0], scope) << "]";
        break;
    case ExprOp::Not:
        os << "(~" << print_expr(e->args[0], scope) << ")";
        break;
    case ExprOp::LogNot:
        os << "(!" << print_expr(e->args[0], scope) << ")";
        break;
    case ExprOp::RedOr:
        os << "(|" << print_expr(e->args[0], scope) << ")";
        break;
    case ExprOp::Mux:
        os << "(" << print_expr(e->args[0], scope) << " ? " << print_expr(e->args[1], scope)
           << " : " << print_expr(e->args[2], scope) << ")";
        break;
    case ExprOp::Concat: {
        os << "{";
        for (size_t i = 0; i < e->args.size(); i++) {
            if (i)
                os << ", ";
            os << print_expr(e->args[i], scope);
        }
        os << "}";
        break;
    }
    case ExprOp::Repl:
        os << "{" << e->repl_count << "{" << print_expr(e->args[0], scope) << "}}";
        break;
    default:
        os << "(" << print_expr(e->args[0], scope) << " " << binop_text(e->op) << " "
           << print_expr(e->args[1], scope) << ")";
        break;
    }
    return os.str();
}

uint64_t EvalEnv::aux_value(const std::string &name) const {
    throw InputError("auxiliary variable '" + name + "' has no value in this context");
}

namespace {
uint64_t shift_amount(uint64_t v) { return v > 64 ? 64 : v; }
} // namespace

uint64_t eval_expr(const Expr &e, const EvalEnv &env) {
    switch (e->op) {
    case ExprOp::Const:
        return e->value;
    case ExprOp::Signal: {
        uint64_t full = env.signal_value(e->signal);
        return mask_width(full >> e->lo, e->width);
    }
    case ExprOp::Aux:
        return mask_width(env.aux_value(e->aux), e->width);
    case ExprOp::MemRead:
        return mask_width(env.mem_word(e->signal, eval_expr(e->args[0], env)), e->width);
    case ExprOp::Not:
        return mask_width(~eval_expr(e->args[0], env), e->width);
    case ExprOp::LogNot:
        return eval_expr(e->args[0], env) == 0 ? 1 : 0;
    case ExprOp::RedOr:
        return eval_expr(e->args[0], env) != 0 ? 1 : 0;
    case ExprOp::Mux:
        return mask_width(eval_expr(e->args[0], env) ? eval_expr(e->args[1], env)
                                                     : eval_expr(e->args[2], env),
                          e->width);
    case ExprOp::Concat: {
        uint64_t v = 0;
        for (const auto &a : e->args) {
            v = (a->width >= 64) ? 0 : (v << a->width);
            v |= eval_expr(a, env);
        }
        return mask_width(v, e->width);
    }
    case ExprOp::Repl: {
        uint64_t part = eval_expr(e->args[0], env);
        uint64_t v = 0;
        for (int i = 0; i < e->repl_count; i++)
            v = (v << e->args[0]->width) | part;
        return mask_width(v, e->width);
    }
    default:
        break;
    }
    uint64_t a = eval_expr(e->args[0], env);
    uint64_t b = eval_expr(e->args[1], env);
    switch (e->op) {
    case ExprOp::And: return mask_width(a & b, e->width);
    case ExprOp::Or: return mask_width(a | b, e->width);
    case ExprOp::Xor: return mask_width(a ^ b, e->width);
    case ExprOp::LogAnd: return (a != 0 && b != 0) ? 1 : 0;
    case ExprOp::LogOr: return (a != 0 || b != 0) ? 1 : 0;
    case ExprOp::Eq: return a == b ? 1 : 0;
    case ExprOp::Ne: return a != b ? 1 : 0;
    case ExprOp::Ult: return a < b ? 1 : 0;
    case ExprOp::Ule: return a <= b ? 1 : 0;
    case ExprOp::Ugt: return a > b ? 1 : 0;
    case ExprOp::Uge: return a >= b ? 1 : 0;
    case ExprOp::Add: return mask_width(a + b, e->width);
    case ExprOp::Sub: return mask_width(a - b, e->width);
    case ExprOp::Shl: return shift_amount(b) >= 64 ? 0 : mask_width(a << shift_amount(b), e->width);
    case ExprOp::Shr: return shift_amount(b) >= 64 ? 0 : mask_width(a >> shift_amount(b), e->width);
    case ExprOp::Sar: {
        int w = e->args[0]->width;
        uint64_t sign = (a >> (w - 1)) & 1;
        uint64_t sh = shift_amount(b);
        if (sh >= static_cast<uint64_t>(w))
            return sign ? mask_width(~uint64_t{0}, w) : 0;
        uint64_t res = a >> sh;
        if (sign)
            res |= mask_width(~uint64_t{0} << (w - sh), w);
        return mask_width(res, w);
    }
    default:
        assert(false && "unhandled op");
        return 0;
    }
}

namespace {

class NullEnv : public EvalEnv {
public:
    uint64_t signal_value(int) const override { throw InputError("not a constant expression"); }
    uint64_t mem_word(int, uint64_t) const override {
        throw InputError("not a constant expression");
    }
};

bool is_constant_tree(const Expr &e) {
    if (e->op == ExprOp::Signal || e->op == ExprOp::Aux || e->op == ExprOp::MemRead)
        return false;
    for (const auto &a : e->args)
        if (!is_constant_tree(a))
            return false;
    return true;
}

} // namespace

Expr fold_expr(const Expr &e) {
    bool changed = false;
    std::vector<Expr> folded;
    folded.reserve(e->args.size());
    for (const auto &a : e->args) {
        Expr f = fold_expr(a);
        changed |= f.get() != a.get();
        folded.push_back(std::move(f));
    }
    Expr base = e;
    if (changed) {
        ExprNode n = *e;
        n.args = folded;
        base = std::make_shared<const ExprNode>(std::move(n));
    }
    if (base->op != ExprOp::Const && is_constant_tree(base)) {
        NullEnv env;
        return e_const(eval_expr(base, env), base->width);
    }
    if (base->op == ExprOp::Mux && base->args[0]->op == ExprOp::Const)
        return base->args[0]->value ? base->args[1] : base->args[2];
    return base;
}

} // namespace leakcheck
