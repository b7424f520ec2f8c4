#include "doctest.h"

#include "fixture_support.hpp"
#include "leakcheck/psl.hpp"

using namespace leakcheck;
using namespace fixture;

namespace {

struct Rig {
    ModuleTree tree;
    FlatNetlist net;
    CoreBinding core;
    ProgramImage naive;

    Rig()
        : tree(parse_fixture_rtl("fixtures/rtl/minirv.v")), net(elaborate_minirv(tree)),
          core(minirv_binding()),
          naive(assemble(read_file("fixtures/programs/naive.s"))) {}
};

Rig &rig() {
    static Rig r;
    return r;
}

} // namespace

TEST_CASE("constraint-set inclusion along the mode chain") {
    auto &r = rig();
    std::vector<AssumptionSet> sets;
    for (Mode m : {Mode::None, Mode::Legal, Mode::Used, Mode::Jumps, Mode::Stack})
        sets.push_back(gen_assumptions(r.net, r.core, m, &r.naive, 8));

    for (size_t i = 1; i < sets.size(); i++) {
        // every predecessor assumption appears, structurally, in the successor
        for (const auto &prev : sets[i - 1].assumes) {
            bool found = false;
            for (const auto &cur : sets[i].assumes)
                found |= cur.name == prev.name && property_equal(cur, prev);
            CHECK(found);
        }
        CHECK(sets[i].assumes.size() >= sets[i - 1].assumes.size());
    }
    CHECK(sets[0].assumes.empty());                   // None
    CHECK(sets[1].assumes.size() == 1);               // Legal: A
    CHECK(sets[2].assumes.size() == 2);               // Used: A+B
    CHECK(sets[3].assumes.size() == 4);               // Jumps: A+B+D+E (C is the table)
    CHECK(sets[3].has_memory_table);
    CHECK(sets[4].stack_depth == 8);                  // Stack adds the monitor
    CHECK(sets[4].has_memory_table);
}

TEST_CASE("used assumption: one equality per distinct encoding") {
    auto &r = rig();
    Property used = gen_used(r.net, r.core, r.naive);
    // count Eq nodes in the condition
    std::function<int(const Expr &)> count_eq = [&](const Expr &e) {
        int n = e->op == ExprOp::Eq ? 1 : 0;
        for (const auto &a : e->args)
            n += count_eq(a);
        return n;
    };
    CHECK(count_eq(used.body->a->atom) == static_cast<int>(r.naive.distinct_encodings().size()));

    ProgramImage empty;
    CHECK_THROWS_AS(gen_used(r.net, r.core, empty), InputError);
}

TEST_CASE("jumps mode refuses to run without metadata") {
    auto &r = rig();
    ProgramImage bare = r.naive;
    bare.has_metadata = false;
    CHECK_THROWS_WITH_AS(gen_jump_constraints(r.net, r.core, bare),
                         doctest::Contains("metadata"), InputError);
    CHECK_THROWS_AS(gen_assumptions(r.net, r.core, Mode::Jumps, &bare, 8), InputError);
    CHECK_THROWS_AS(gen_assumptions(r.net, r.core, Mode::Jumps, nullptr, 8), InputError);
}

TEST_CASE("call-stack depth below the program's static depth is rejected") {
    auto &r = rig();
    CHECK(r.naive.static_call_depth() == 4);
    CHECK_THROWS_WITH_AS(gen_call_stack(r.net, r.core, r.naive, 3),
                         doctest::Contains("static call depth"), InputError);
    StackMonitorSpec spec = gen_call_stack(r.net, r.core, r.naive, 4);
    CHECK(spec.depth == 4);
    CHECK(spec.width == 32);
}

TEST_CASE("memory table: pc-indexed reads return the image words") {
    auto &r = rig();
    TsOptions::InputBinding binding = gen_memory_table(r.net, r.core, r.naive);
    CHECK(binding.signal == r.net.require_signal("minirv.instr_rdata"));

    NetSim sim(r.net);
    int pc = r.net.require_signal("minirv.pc");
    for (const auto &[addr, word] : r.naive.words) {
        sim.set_value(pc, addr);
        CHECK(eval_expr(binding.func, sim) == word);
    }
    // gap addresses read the illegal filler
    sim.set_value(pc, 0x4000);
    CHECK(eval_expr(binding.func, sim) == 0);
}

TEST_CASE("self-modifying designs are rejected for the lookup table") {
    auto &r = rig();
    CoreBinding hostile = r.core;
    hostile.instr_write_ports.push_back("minirv.dmem_wdata");
    CHECK_THROWS_WITH_AS(gen_memory_table(r.net, hostile, r.naive),
                         doctest::Contains("write port"), InputError);
}

TEST_CASE("assumption dump is valid PSL that parses back") {
    auto &r = rig();
    AssumptionSet stack = gen_assumptions(r.net, r.core, Mode::Stack, &r.naive, 8);
    for (const auto &p : stack.assumes) {
        std::string text = emit_psl(p, r.net, "minirv.clk");
        Property back = parse_psl(text, r.net);
        CHECK(property_equal(p, back));
        CHECK(back.kind == PropKind::Assume);
    }
    std::string dump = stack.psl_dump(r.net, "minirv.clk");
    CHECK(dump.find("assume_legal") != std::string::npos);
    CHECK(dump.find("call-stack monitor") != std::string::npos);
}

TEST_CASE("real executions never violate generated assumptions (10k cycles)") {
    auto &r = rig();
    for (const char *prog : {"fixtures/programs/naive.s", "fixtures/programs/patched.s",
                             "fixtures/programs/trojan.s"}) {
        ProgramImage img = assemble(read_file(prog));
        for (Mode m : {Mode::Legal, Mode::Used, Mode::Jumps, Mode::Stack}) {
            AssumptionSet set = gen_assumptions(r.net, r.core, m, &img, 8);
            CAPTURE(prog);
            CAPTURE(mode_name(m));
            CHECK(count_assumption_violations(r.net, img, set, 10000) == 0);
        }
    }
}

TEST_CASE("the naive program actually leaks the key into data memory") {
    auto &r = rig();
    std::vector<uint32_t> key = {0xdead0001, 0xdead0002, 0xdead0003, 0xdead0004};
    SystemSim sys(r.net, r.naive, key);
    for (int c = 0; c < 200; c++)
        sys.step();
    // k[] lives at byte 64 = word 16
    CHECK(sys.dmem_word(16) == key[0]);
    CHECK(sys.dmem_word(17) == key[1]);
    CHECK(sys.dmem_word(18) == key[2]);
    CHECK(sys.dmem_word(19) == key[3]);
}

TEST_CASE("the patched program keeps the key out of data memory") {
    auto &r = rig();
    ProgramImage img = assemble(read_file("fixtures/programs/patched.s"));
    std::vector<uint32_t> key = {0xdead0001, 0xdead0002, 0xdead0003, 0xdead0004};
    SystemSim sys(r.net, img, key);
    for (int c = 0; c < 200; c++)
        sys.step();
    for (size_t w = 0; w < 64; w++) {
        for (uint32_t kw : key)
            CHECK(sys.dmem_word(w) != kw);
    }
}

TEST_CASE("return targets: two call sites make exactly two allowed addresses") {
    auto &r = rig();
    ProgramImage img = assemble(R"(
entry:
    call fn
    call fn
halt:
    j halt
fn:
    nop
    ret
)");
    REQUIRE(img.call_sites.size() == 2);
    auto props = gen_jump_constraints(r.net, r.core, img);
    // the return-target property carries one equality per call site
    std::function<int(const Expr &)> count_eq = [&](const Expr &e) {
        int n = e->op == ExprOp::Eq ? 1 : 0;
        for (const auto &a : e->args)
            n += count_eq(a);
        return n;
    };
    // implies(ret==1, t==ra1 || t==ra2): one Eq for the trigger, two targets
    CHECK(count_eq(props[0].body->a->atom) == 3);
}

TEST_CASE("leaf program: returns become unreachable under jumps") {
    auto &r = rig();
    ProgramImage img = assemble("entry:\n nop\nhalt:\n j halt\n");
    auto props = gen_jump_constraints(r.net, r.core, img);
    // no call sites: the constraint reduces to "no return ever executes"
    const Expr &cond = props[0].body->a->atom;
    // implies(ret, false) == !(ret == 1)
    CHECK(cond->op == ExprOp::LogNot);
}
