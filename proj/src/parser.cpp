#include "leakcheck/parser.hpp"

#include <unordered_set>

#include "leakcheck/lexer.hpp"

namespace leakcheck {

namespace {

const std::unordered_set<std::string> kUnsupportedKeywords = {
    "initial",  "negedge",  "function", "task",   "generate", "endgenerate", "genvar",
    "for",      "while",    "repeat",   "forever", "casez",    "casex",       "inout",
    "signed",   "integer",  "real",     "tri",     "fork",     "join",        "specify",
    "always_comb", "always_ff", "always_latch", "defparam", "deassign", "force", "wait",
};

const std::unordered_set<std::string> kKeywords = {
    "module", "endmodule", "input", "output", "wire", "reg", "parameter", "localparam",
    "assign", "always", "posedge", "begin", "end", "if", "else", "case", "endcase", "default",
};

class Parser {
public:
    explicit Parser(const std::string &text) : toks_(lex(text)) {}

    ModuleTree parse() {
        ModuleTree tree;
        while (!peek().is(Tok::End)) {
            expect_keyword("module");
            tree.modules.push_back(parse_module());
        }
        return tree;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;

    const Token &peek(size_t ahead = 0) const {
        size_t p = pos_ + ahead;
        return p < toks_.size() ? toks_[p] : toks_.back();
    }
    const Token &get() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const Token &tok, const std::string &msg) {
        throw InputError(tok.loc, msg + " (got '" + (tok.is(Tok::End) ? "<eof>" : tok.text) + "')");
    }

    void check_supported(const Token &tok) {
        if (tok.is(Tok::Ident) && kUnsupportedKeywords.count(tok.text))
            throw InputError(tok.loc, "unsupported construct '" + tok.text + "'");
    }

    void expect_punct(const char *p) {
        const Token &t = peek();
        if (!t.is_punct(p))
            fail(t, std::string("expected '") + p + "'");
        get();
    }

    void expect_keyword(const char *kw) {
        const Token &t = peek();
        check_supported(t);
        if (!t.is_ident(kw))
            fail(t, std::string("expected '") + kw + "'");
        get();
    }

    bool accept_punct(const char *p) {
        if (peek().is_punct(p)) {
            get();
            return true;
        }
        return false;
    }

    bool accept_keyword(const char *kw) {
        if (peek().is_ident(kw)) {
            get();
            return true;
        }
        return false;
    }

    std::string expect_name() {
        const Token &t = peek();
        check_supported(t);
        if (!t.is(Tok::Ident) || kKeywords.count(t.text))
            fail(t, "expected identifier");
        return get().text;
    }

    // ---- expressions ----

    AstExprPtr mk(AstExpr::Kind kind, SourceLoc loc) {
        auto e = std::make_shared<AstExpr>();
        e->kind = kind;
        e->loc = loc;
        return e;
    }

    AstExprPtr parse_expr() { return parse_ternary(); }

    AstExprPtr parse_ternary() {
        AstExprPtr cond = parse_binary(0);
        if (!peek().is_punct("?"))
            return cond;
        SourceLoc loc = get().loc;
        AstExprPtr a = parse_ternary();
        expect_punct(":");
        AstExprPtr b = parse_ternary();
        auto e = mk(AstExpr::Kind::Ternary, loc);
        e->args = {cond, a, b};
        return e;
    }

    struct OpLevel {
        const char *text;
        AstBinOp op;
        int level;
    };

    static const std::vector<OpLevel> &op_table() {
        static const std::vector<OpLevel> table = {
            {"||", AstBinOp::LogOr, 0}, {"&&", AstBinOp::LogAnd, 1}, {"|", AstBinOp::Or, 2},
            {"^", AstBinOp::Xor, 3},    {"&", AstBinOp::And, 4},     {"==", AstBinOp::Eq, 5},
            {"!=", AstBinOp::Ne, 5},    {"<", AstBinOp::Lt, 6},      {"<=", AstBinOp::Le, 6},
            {">", AstBinOp::Gt, 6},     {">=", AstBinOp::Ge, 6},     {"<<", AstBinOp::Shl, 7},
            {">>", AstBinOp::Shr, 7},   {">>>", AstBinOp::Sar, 7},   {"+", AstBinOp::Add, 8},
            {"-", AstBinOp::Sub, 8},
        };
        return table;
    }

    static constexpr int kMaxLevel = 9;

    AstExprPtr parse_binary(int level) {
        if (level >= kMaxLevel)
            return parse_unary();
        AstExprPtr lhs = parse_binary(level + 1);
        for (;;) {
            const Token &t = peek();
            const OpLevel *found = nullptr;
            if (t.is(Tok::Punct)) {
                for (const auto &o : op_table())
                    if (o.level == level && t.text == o.text) {
                        found = &o;
                        break;
                    }
            }
            if (!found)
                return lhs;
            SourceLoc loc = get().loc;
            AstExprPtr rhs = parse_binary(level + 1);
            auto e = mk(AstExpr::Kind::Binary, loc);
            e->binop = found->op;
            e->args = {lhs, rhs};
            lhs = e;
        }
    }

    AstExprPtr parse_unary() {
        const Token &t = peek();
        if (t.is_punct("~") || t.is_punct("!") || t.is_punct("-")) {
            SourceLoc loc = get().loc;
            auto e = mk(AstExpr::Kind::Unary, loc);
            e->unop = t.text == "~" ? AstUnOp::BitNot : t.text == "!" ? AstUnOp::LogNot
                                                                      : AstUnOp::Neg;
            e->args = {parse_unary()};
            return e;
        }
        return parse_primary();
    }

    AstExprPtr parse_primary() {
        const Token &t = peek();
        check_supported(t);
        if (t.is(Tok::Number)) {
            ParsedNumber num = parse_number_token(t);
            auto e = mk(AstExpr::Kind::Number, t.loc);
            e->number = num.value;
            e->number_width = num.width;
            get();
            return e;
        }
        if (t.is_punct("(")) {
            get();
            AstExprPtr inner = parse_expr();
            expect_punct(")");
            return inner;
        }
        if (t.is_punct("{")) {
            SourceLoc loc = get().loc;
            AstExprPtr first = parse_expr();
            if (peek().is_punct("{")) {
                // replication {N{expr}}
                get();
                AstExprPtr part = parse_expr();
                expect_punct("}");
                expect_punct("}");
                auto e = mk(AstExpr::Kind::Repl, loc);
                e->args = {first, part};
                return e;
            }
            auto e = mk(AstExpr::Kind::Concat, loc);
            e->args.push_back(first);
            while (accept_punct(","))
                e->args.push_back(parse_expr());
            expect_punct("}");
            return e;
        }
        if (t.is(Tok::Ident)) {
            if (kKeywords.count(t.text))
                fail(t, "expected expression");
            std::string name = get().text;
            return parse_select_suffix(name, t.loc);
        }
        fail(t, "expected expression");
    }

    AstExprPtr parse_select_suffix(const std::string &name, SourceLoc loc) {
        if (!peek().is_punct("[")) {
            auto e = mk(AstExpr::Kind::Ident, loc);
            e->ident = name;
            return e;
        }
        get();
        AstExprPtr first = parse_expr();
        if (accept_punct(":")) {
            AstExprPtr lsb = parse_expr();
            expect_punct("]");
            auto e = mk(AstExpr::Kind::Range, loc);
            e->ident = name;
            e->args = {first, lsb};
            return e;
        }
        expect_punct("]");
        auto e = mk(AstExpr::Kind::Index, loc);
        e->ident = name;
        e->args = {first};
        return e;
    }

    // ---- statements ----

    AstStmtPtr mk_stmt(AstStmt::Kind kind, SourceLoc loc) {
        auto s = std::make_shared<AstStmt>();
        s->kind = kind;
        s->loc = loc;
        return s;
    }

    AstStmtPtr parse_stmt() {
        const Token &t = peek();
        check_supported(t);
        if (t.is_ident("begin")) {
            SourceLoc loc = get().loc;
            auto s = mk_stmt(AstStmt::Kind::Block, loc);
            while (!peek().is_ident("end")) {
                if (peek().is(Tok::End))
                    fail(peek(), "expected 'end'");
                s->stmts.push_back(parse_stmt());
            }
            get();
            return s;
        }
        if (t.is_ident("if")) {
            SourceLoc loc = get().loc;
            expect_punct("(");
            auto s = mk_stmt(AstStmt::Kind::If, loc);
            s->cond = parse_expr();
            expect_punct(")");
            s->then_stmt = parse_stmt();
            if (accept_keyword("else"))
                s->else_stmt = parse_stmt();
            return s;
        }
        if (t.is_ident("case")) {
            SourceLoc loc = get().loc;
            expect_punct("(");
            auto s = mk_stmt(AstStmt::Kind::Case, loc);
            s->case_expr = parse_expr();
            expect_punct(")");
            while (!peek().is_ident("endcase")) {
                if (peek().is(Tok::End))
                    fail(peek(), "expected 'endcase'");
                AstStmt::CaseArm arm;
                arm.loc = peek().loc;
                if (accept_keyword("default")) {
                    expect_punct(":");
                } else {
                    arm.labels.push_back(parse_expr());
                    while (accept_punct(","))
                        arm.labels.push_back(parse_expr());
                    expect_punct(":");
                }
                arm.body = parse_stmt();
                s->arms.push_back(std::move(arm));
            }
            get();
            return s;
        }
        // assignment
        SourceLoc loc = t.loc;
        std::string name = expect_name();
        AstExprPtr lhs = parse_select_suffix(name, loc);
        bool nonblocking;
        if (accept_punct("<="))
            nonblocking = true;
        else if (accept_punct("="))
            nonblocking = false;
        else
            fail(peek(), "expected '=' or '<='");
        auto s = mk_stmt(AstStmt::Kind::Assign, loc);
        s->lhs = lhs;
        s->rhs = parse_expr();
        s->nonblocking = nonblocking;
        expect_punct(";");
        return s;
    }

    // ---- module items ----

    AstRange parse_opt_range() {
        AstRange r;
        if (!peek().is_punct("["))
            return r;
        get();
        r.present = true;
        r.msb = parse_expr();
        expect_punct(":");
        r.lsb = parse_expr();
        expect_punct("]");
        return r;
    }

    AstModule parse_module() {
        AstModule mod;
        mod.loc = peek().loc;
        mod.name = expect_name();
        expect_punct("(");
        if (!peek().is_punct(")")) {
            bool cur_input = true;
            bool have_dir = false;
            for (;;) {
                AstPort port;
                port.loc = peek().loc;
                check_supported(peek());
                if (accept_keyword("input")) {
                    cur_input = true;
                    have_dir = true;
                } else if (accept_keyword("output")) {
                    cur_input = false;
                    have_dir = true;
                }
                if (!have_dir)
                    fail(peek(), "port list requires explicit directions");
                port.is_input = cur_input;
                port.is_reg = accept_keyword("reg");
                port.range = parse_opt_range();
                port.name = expect_name();
                mod.ports.push_back(std::move(port));
                if (!accept_punct(","))
                    break;
            }
        }
        expect_punct(")");
        expect_punct(";");

        while (!peek().is_ident("endmodule")) {
            const Token &t = peek();
            check_supported(t);
            if (t.is(Tok::End))
                fail(t, "expected 'endmodule'");
            if (accept_keyword("parameter") || accept_keyword("localparam")) {
                for (;;) {
                    AstParam p;
                    p.loc = peek().loc;
                    p.name = expect_name();
                    expect_punct("=");
                    p.value = parse_expr();
                    mod.params.push_back(std::move(p));
                    if (!accept_punct(","))
                        break;
                }
                expect_punct(";");
                continue;
            }
            if (t.is_ident("wire") || t.is_ident("reg")) {
                bool is_reg = t.text == "reg";
                get();
                AstRange range = parse_opt_range();
                for (;;) {
                    AstNet net;
                    net.loc = peek().loc;
                    net.is_reg = is_reg;
                    net.range = range;
                    net.name = expect_name();
                    net.array = parse_opt_range();
                    if (net.array.present && !is_reg)
                        throw InputError(net.loc, "memory arrays must be declared 'reg'");
                    mod.nets.push_back(std::move(net));
                    if (!accept_punct(","))
                        break;
                }
                expect_punct(";");
                continue;
            }
            if (accept_keyword("assign")) {
                AstAssign a;
                a.loc = peek().loc;
                std::string name = expect_name();
                a.lhs = parse_select_suffix(name, a.loc);
                expect_punct("=");
                a.rhs = parse_expr();
                expect_punct(";");
                mod.assigns.push_back(std::move(a));
                continue;
            }
            if (accept_keyword("always")) {
                AstAlways blk;
                blk.loc = t.loc;
                expect_punct("@");
                expect_punct("(");
                if (peek().is_punct("*"))
                    throw InputError(peek().loc,
                                     "unsupported construct 'always @(*)' (use assign)");
                expect_keyword("posedge");
                blk.clock = expect_name();
                if (!peek().is_punct(")"))
                    throw InputError(peek().loc,
                                     "unsupported construct: multiple sensitivity items");
                expect_punct(")");
                blk.body = parse_stmt();
                mod.always_blocks.push_back(std::move(blk));
                continue;
            }
            if (t.is(Tok::Ident) && !kKeywords.count(t.text)) {
                // instance: ModuleName [#(...)] inst_name ( conns ) ;
                AstInstance inst;
                inst.loc = t.loc;
                inst.module_name = get().text;
                if (accept_punct("#")) {
                    expect_punct("(");
                    for (;;) {
                        expect_punct(".");
                        std::string pname = expect_name();
                        expect_punct("(");
                        inst.params.emplace_back(pname, parse_expr());
                        expect_punct(")");
                        if (!accept_punct(","))
                            break;
                    }
                    expect_punct(")");
                }
                inst.instance_name = expect_name();
                expect_punct("(");
                if (!peek().is_punct(")")) {
                    for (;;) {
                        if (accept_punct(".")) {
                            std::string pname = expect_name();
                            expect_punct("(");
                            inst.conns.emplace_back(pname, parse_expr());
                            expect_punct(")");
                        } else {
                            inst.conns.emplace_back(std::string(), parse_expr());
                        }
                        if (!accept_punct(","))
                            break;
                    }
                }
                expect_punct(")");
                expect_punct(";");
                mod.instances.push_back(std::move(inst));
                continue;
            }
            fail(t, "expected module item");
        }
        get(); // endmodule
        return mod;
    }
};

} // namespace

ModuleTree parse_rtl(const std::string &text) {
    Parser p(text);
    return p.parse();
}

ModuleTree parse_rtl_files(const std::vector<std::pair<std::string, std::string>> &name_text) {
    ModuleTree tree;
    for (const auto &[name, text] : name_text) {
        try {
            ModuleTree part = parse_rtl(text);
            for (auto &m : part.modules)
                tree.modules.push_back(std::move(m));
        } catch (InputError &e) {
            throw InputError(e.diag.loc, name + ": " + e.diag.message);
        }
    }
    return tree;
}

} // namespace leakcheck
