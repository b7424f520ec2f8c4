#include "leakcheck/psl.hpp"

#include <functional>
#include <sstream>

#include "leakcheck/lexer.hpp"

namespace leakcheck {

// ---- emission ----

namespace {

// binding strength: concat < fuse < repetition/atom
int seq_level(const Seq &s) {
    switch (s->op) {
    case SeqOp::Concat: return 0;
    case SeqOp::Fuse: return 1;
    default: return 2;
    }
}

void emit_seq(std::ostream &os, const Seq &s, const SymbolScope &scope, int min_level) {
    int level = seq_level(s);
    bool braces = level < min_level;
    if (braces)
        os << "{";
    switch (s->op) {
    case SeqOp::Atom:
        os << "(" << print_expr(s->atom, scope) << ")";
        break;
    case SeqOp::RepInf:
        emit_seq(os, s->a, scope, 2);
        os << "[*]";
        break;
    case SeqOp::Fuse:
        emit_seq(os, s->a, scope, 1);
        os << " : ";
        emit_seq(os, s->b, scope, 2);
        break;
    case SeqOp::Concat:
        emit_seq(os, s->a, scope, 0);
        os << " ; ";
        emit_seq(os, s->b, scope, 1);
        break;
    }
    if (braces)
        os << "}";
}

} // namespace

std::string emit_psl(const Property &prop, const SymbolScope &scope,
                     const std::string &clock_name) {
    std::ostringstream os;
    os << "default clock = (posedge " << clock_name << ");\n";
    os << (prop.kind == PropKind::Cover ? "cover" : "assume") << " { ";
    emit_seq(os, prop.body, scope, 0);
    os << " };\n";
    return os.str();
}

// ---- parsing ----

namespace {

class PslParser {
public:
    PslParser(const std::string &text, const FlatNetlist &net)
        : net_(net), toks_(lex(text, LexOptions{/*dotted_idents=*/true})) {}

    Property parse() {
        Property prop;
        if (peek().is_ident("default")) {
            get();
            expect_ident("clock");
            expect_punct("=");
            expect_punct("(");
            expect_ident("posedge");
            expect_name();
            expect_punct(")");
            expect_punct(";");
        }
        if (accept_ident("cover"))
            prop.kind = PropKind::Cover;
        else if (accept_ident("assume"))
            prop.kind = PropKind::Assume;
        else
            fail(peek(), "expected 'cover' or 'assume'");
        expect_punct("{");
        prop.body = parse_concat();
        expect_punct("}");
        expect_punct(";");
        if (!peek().is(Tok::End))
            fail(peek(), "trailing text after property");
        prop.body = infer_aux_widths(prop.body);
        return prop;
    }

private:
    const FlatNetlist &net_;
    std::vector<Token> toks_;
    size_t pos_ = 0;

    const Token &peek() const { return toks_[pos_ < toks_.size() ? pos_ : toks_.size() - 1]; }
    const Token &get() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const Token &t, const std::string &msg) {
        throw InputError(t.loc, msg + " (got '" + (t.is(Tok::End) ? "<eof>" : t.text) + "')");
    }
    void expect_punct(const char *p) {
        if (!peek().is_punct(p))
            fail(peek(), std::string("expected '") + p + "'");
        get();
    }
    void expect_ident(const char *s) {
        if (!peek().is_ident(s))
            fail(peek(), std::string("expected '") + s + "'");
        get();
    }
    bool accept_ident(const char *s) {
        if (peek().is_ident(s)) {
            get();
            return true;
        }
        return false;
    }
    bool accept_punct(const char *p) {
        if (peek().is_punct(p)) {
            get();
            return true;
        }
        return false;
    }
    std::string expect_name() {
        if (!peek().is(Tok::Ident))
            fail(peek(), "expected identifier");
        return get().text;
    }

    // sequences, precedence [*] > : > ;
    Seq parse_concat() {
        Seq s = parse_fuse();
        while (accept_punct(";"))
            s = s_concat(s, parse_fuse());
        return s;
    }
    Seq parse_fuse() {
        Seq s = parse_rep();
        while (accept_punct(":"))
            s = s_fuse(s, parse_rep());
        return s;
    }
    Seq parse_rep() {
        const Token &t = peek();
        Seq s = parse_element();
        while (accept_punct("[*]")) {
            if (s->op != SeqOp::Atom)
                throw InputError(t.loc, "repetition body must be a plain Boolean condition");
            s = s_repinf(s);
        }
        return s;
    }
    Seq parse_element() {
        if (accept_punct("{")) {
            Seq s = parse_concat();
            expect_punct("}");
            return s;
        }
        if (peek().is_punct("(")) {
            // an atom: one parenthesized Boolean expression
            Expr e = parse_expr_primary();
            if (e->width != 1)
                e = cond_true(e);
            return s_atom(e);
        }
        fail(peek(), "expected '(' condition or '{' sequence");
    }

    // ---- boolean layer ----

    Expr parse_expr() { return parse_ternary(); }

    Expr parse_ternary() {
        Expr c = parse_binary(0);
        if (!accept_punct("?"))
            return c;
        Expr a = parse_ternary();
        expect_punct(":");
        Expr b = parse_ternary();
        if (c->width != 1)
            c = e_redor(c);
        return e_mux(c, a, b);
    }

    struct OpEntry {
        const char *text;
        ExprOp op;
        int level;
    };
    static const std::vector<OpEntry> &ops() {
        static const std::vector<OpEntry> table = {
            {"||", ExprOp::LogOr, 0}, {"&&", ExprOp::LogAnd, 1}, {"|", ExprOp::Or, 2},
            {"^", ExprOp::Xor, 3},    {"&", ExprOp::And, 4},     {"==", ExprOp::Eq, 5},
            {"!=", ExprOp::Ne, 5},    {"<", ExprOp::Ult, 6},     {"<=", ExprOp::Ule, 6},
            {">", ExprOp::Ugt, 6},    {">=", ExprOp::Uge, 6},    {"<<", ExprOp::Shl, 7},
            {">>", ExprOp::Shr, 7},   {">>>", ExprOp::Sar, 7},   {"+", ExprOp::Add, 8},
            {"-", ExprOp::Sub, 8},
        };
        return table;
    }
    static constexpr int kMaxLevel = 9;

    Expr parse_binary(int level) {
        if (level >= kMaxLevel)
            return parse_unary();
        Expr lhs = parse_binary(level + 1);
        for (;;) {
            const OpEntry *found = nullptr;
            if (peek().is(Tok::Punct))
                for (const auto &o : ops())
                    if (o.level == level && peek().text == o.text) {
                        found = &o;
                        break;
                    }
            if (!found)
                return lhs;
            get();
            Expr rhs = parse_binary(level + 1);
            lhs = e_binop(found->op, lhs, rhs);
        }
    }

    Expr parse_unary() {
        if (accept_punct("~"))
            return e_not(parse_unary());
        if (accept_punct("!"))
            return e_lognot(parse_unary());
        if (accept_punct("-")) {
            Expr a = parse_unary();
            return e_binop(ExprOp::Sub, e_const(0, a->width), a);
        }
        if (accept_punct("|"))
            return e_redor(parse_unary());
        return parse_expr_primary();
    }

    Expr parse_expr_primary() {
        const Token &t = peek();
        if (t.is(Tok::Number)) {
            ParsedNumber num = parse_number_token(t);
            get();
            return e_const(num.value, num.width == 0 ? 32 : num.width);
        }
        if (t.is_punct("(")) {
            get();
            Expr inner = parse_expr();
            expect_punct(")");
            return inner;
        }
        if (t.is_punct("{")) {
            get();
            Expr first = parse_expr();
            if (accept_punct("{")) {
                if (first->op != ExprOp::Const)
                    fail(t, "replication count must be constant");
                Expr part = parse_expr();
                expect_punct("}");
                expect_punct("}");
                return e_repl(static_cast<int>(first->value), part);
            }
            std::vector<Expr> parts{first};
            while (accept_punct(","))
                parts.push_back(parse_expr());
            expect_punct("}");
            return e_concat(std::move(parts));
        }
        if (t.is(Tok::Ident)) {
            std::string name = get().text;
            int sig = net_.find_signal(name);
            if (sig < 0) {
                // frozen/auxiliary variable; width refined afterwards
                if (peek().is_punct("["))
                    fail(peek(), "select on unknown identifier '" + name + "'");
                return e_aux(name, 1);
            }
            const SignalDecl &d = net_.signal(sig);
            if (accept_punct("[")) {
                if (d.kind == SignalKind::Memory) {
                    Expr addr = parse_expr();
                    expect_punct("]");
                    return e_mem_read(sig, d.width, addr);
                }
                Expr first = parse_expr();
                first = fold_expr(first);
                if (first->op != ExprOp::Const)
                    fail(t, "bit selects must be constant");
                if (accept_punct(":")) {
                    Expr lo = fold_expr(parse_expr());
                    if (lo->op != ExprOp::Const)
                        fail(t, "part selects must be constant");
                    expect_punct("]");
                    return e_signal(sig, static_cast<int>(first->value),
                                    static_cast<int>(lo->value));
                }
                expect_punct("]");
                return e_signal(sig, static_cast<int>(first->value),
                                static_cast<int>(first->value));
            }
            if (d.kind == SignalKind::Memory)
                fail(t, "memory '" + name + "' needs a word index");
            return e_signal(sig, d.width - 1, 0);
        }
        fail(t, "expected expression");
    }

    // Frozen variables take the width of whatever they are compared against.
    Seq infer_aux_widths(Seq body) {
        std::unordered_map<std::string, int> widths;
        std::function<void(const Expr &)> scan = [&](const Expr &e) {
            if ((e->op == ExprOp::Eq || e->op == ExprOp::Ne) && e->args.size() == 2) {
                for (int side = 0; side < 2; side++) {
                    const Expr &a = e->args[side];
                    const Expr &b = e->args[1 - side];
                    if (a->op == ExprOp::Aux && b->op != ExprOp::Aux) {
                        auto it = widths.find(a->aux);
                        int w = b->width;
                        if (it == widths.end() || it->second < w)
                            widths[a->aux] = w;
                    }
                }
            }
            for (const auto &a : e->args)
                scan(a);
        };
        std::function<void(const Seq &)> scan_seq = [&](const Seq &s) {
            if (s->op == SeqOp::Atom)
                scan(s->atom);
            if (s->a)
                scan_seq(s->a);
            if (s->b)
                scan_seq(s->b);
        };
        scan_seq(body);
        if (widths.empty())
            return body;

        std::function<Expr(const Expr &)> rewrite = [&](const Expr &e) -> Expr {
            if (e->op == ExprOp::Aux) {
                auto it = widths.find(e->aux);
                if (it != widths.end() && it->second != e->width)
                    return e_aux(e->aux, it->second);
                return e;
            }
            if (e->args.empty())
                return e;
            bool changed = false;
            std::vector<Expr> args;
            for (const auto &a : e->args) {
                Expr r = rewrite(a);
                changed |= r.get() != a.get();
                args.push_back(std::move(r));
            }
            if (!changed)
                return e;
            ExprNode copy = *e;
            copy.args = std::move(args);
            return std::make_shared<const ExprNode>(std::move(copy));
        };
        std::function<Seq(const Seq &)> rewrite_seq = [&](const Seq &s) -> Seq {
            if (s->op == SeqOp::Atom)
                return s_atom(rewrite(s->atom));
            if (s->op == SeqOp::RepInf)
                return s_repinf(rewrite_seq(s->a));
            Seq a = rewrite_seq(s->a);
            Seq b = rewrite_seq(s->b);
            return s->op == SeqOp::Fuse ? s_fuse(a, b) : s_concat(a, b);
        };
        return rewrite_seq(body);
    }
};

} // namespace

Property parse_psl(const std::string &text, const FlatNetlist &net) {
    PslParser p(text, net);
    return p.parse();
}

} // namespace leakcheck
