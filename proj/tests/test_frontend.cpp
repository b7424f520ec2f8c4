#include "doctest.h"

#include "leakcheck/elaborate.hpp"
#include "leakcheck/parser.hpp"
#include "leakcheck/sim.hpp"
#include "leakcheck/tree_sim.hpp"

#include <random>

using namespace leakcheck;

namespace {

const char *kMuxSource = R"(
module mux1(input clk, input sel, input secret, input pub, output out);
  assign out = sel ? secret : pub;
endmodule
)";

} // namespace

TEST_CASE("lexer rejects x/z literals") {
    CHECK_THROWS_AS(parse_rtl("module m(input a); wire w; assign w = 1'bx; endmodule"),
                    InputError);
}

TEST_CASE("parser handles the mux example") {
    ModuleTree tree = parse_rtl(kMuxSource);
    REQUIRE(tree.modules.size() == 1);
    const AstModule &m = tree.modules[0];
    CHECK(m.name == "mux1");
    CHECK(m.ports.size() == 5);
    CHECK(m.assigns.size() == 1);
    CHECK(m.assigns[0].rhs->kind == AstExpr::Kind::Ternary);
}

TEST_CASE("empty module with ports only") {
    ModuleTree tree = parse_rtl("module empty(input clk, output unused_out);\nendmodule\n");
    REQUIRE(tree.modules.size() == 1);
    CHECK(tree.modules[0].assigns.empty());
    CHECK(tree.modules[0].always_blocks.empty());
}

TEST_CASE("syntax errors carry positions") {
    try {
        parse_rtl("module m(input a);\n  assign = 1;\nendmodule");
        FAIL("expected InputError");
    } catch (const InputError &e) {
        CHECK(e.diag.loc.line == 2);
        CHECK(std::string(e.what()).find("expected identifier") != std::string::npos);
    }
}

TEST_CASE("unsupported constructs are named, never silently accepted") {
    CHECK_THROWS_WITH_AS(parse_rtl("module m(input a); initial begin end endmodule"),
                         doctest::Contains("unsupported construct 'initial'"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_rtl("module m(input clk); always @(negedge clk) begin end endmodule"),
        doctest::Contains("unsupported"), InputError);
    CHECK_THROWS_WITH_AS(parse_rtl("module m(input clk, input a); wire w; always @(*) w = a; "
                                   "endmodule"),
                         doctest::Contains("unsupported"), InputError);
}

TEST_CASE("pretty-print round trip is structurally identical") {
    const char *sources[] = {
        kMuxSource,
        R"(
module counter(input clk, input rst, input en, output [7:0] q);
  reg [7:0] count;
  assign q = count;
  always @(posedge clk)
    if (rst)
      count <= 8'h0;
    else if (en)
      count <= count + 8'h1;
endmodule
)",
        R"(
module top(input clk, input [3:0] a, output [3:0] y);
  wire [3:0] t;
  child u1(.clk(clk), .d(a), .q(t));
  child u2(.clk(clk), .d(t), .q(y));
endmodule
module child(input clk, input [3:0] d, output [3:0] q);
  reg [3:0] r;
  assign q = r;
  always @(posedge clk)
    r <= d;
endmodule
)",
    };
    for (const char *src : sources) {
        ModuleTree t1 = parse_rtl(src);
        std::string printed = pretty_print(t1);
        ModuleTree t2 = parse_rtl(printed);
        CHECK(module_tree_equal(t1, t2));
    }
}

TEST_CASE("elaboration prefixes names with the instance path") {
    const char *src = R"(
module top(input clk, input [2:0] a, output [2:0] y);
  wire [2:0] t;
  leaf u1(.clk(clk), .d(a), .q(t));
  leaf u2(.clk(clk), .d(t), .q(y));
endmodule
module leaf(input clk, input [2:0] d, output [2:0] q);
  reg [2:0] r;
  wire [2:0] rn;
  assign rn = ~r;
  assign q = r;
  always @(posedge clk)
    r <= d;
endmodule
)";
    FlatNetlist net = elaborate(parse_rtl(src));
    CHECK(net.find_signal("top.u1.r") >= 0);
    CHECK(net.find_signal("top.u2.r") >= 0);
    CHECK(net.find_signal("top.u1.rn") >= 0);
    CHECK(net.find_signal("top.u2.rn") >= 0);
    CHECK(net.find_signal("top.u1.d") >= 0);
    CHECK(net.find_signal("top.u2.q") >= 0);
    CHECK(net.signal(net.clock).name == "top.clk");
}

TEST_CASE("guarded register write gets its condition flattened") {
    const char *src = R"(
module m(input clk, input en, input [3:0] d, output [3:0] q);
  reg [3:0] r;
  assign q = r;
  always @(posedge clk)
    if (en)
      r <= d;
endmodule
)";
    FlatNetlist net = elaborate(parse_rtl(src));
    int r = net.require_signal("m.r");
    int clocked = 0;
    for (const auto &a : net.assignments) {
        if (a.timing != Timing::Clocked)
            continue;
        clocked++;
        CHECK(a.target.signal == r);
        CHECK_FALSE(is_const_true(a.condition));
    }
    CHECK(clocked == 1);
}

TEST_CASE("combinational cycles are reported with the signal list") {
    const char *src = R"(
module m(input clk, output y);
  wire a;
  wire b;
  assign a = b;
  assign b = a;
  assign y = a;
endmodule
)";
    CHECK_THROWS_WITH_AS(elaborate(parse_rtl(src)), doctest::Contains("combinational cycle"),
                         InputError);
    try {
        elaborate(parse_rtl(src));
    } catch (const InputError &e) {
        CHECK(std::string(e.what()).find("m.a") != std::string::npos);
        CHECK(std::string(e.what()).find("m.b") != std::string::npos);
    }
}

TEST_CASE("multiple clock domains are a hard error") {
    const char *src = R"(
module m(input clk1, input clk2, input d, output q);
  reg r1;
  reg r2;
  assign q = r1 & r2;
  always @(posedge clk1) r1 <= d;
  always @(posedge clk2) r2 <= d;
endmodule
)";
    CHECK_THROWS_WITH_AS(elaborate(parse_rtl(src)), doctest::Contains("multiple clock domains"),
                         InputError);
}

TEST_CASE("unresolved instance is an error") {
    const char *src = R"(
module m(input clk, output y);
  ghost u1(.clk(clk), .y(y));
endmodule
)";
    CHECK_THROWS_WITH_AS(elaborate(parse_rtl(src)), doctest::Contains("unresolved instance"),
                         InputError);
}

namespace {

// Drives both simulators with the same random inputs and compares every
// signal and memory word each cycle; mismatches are counted so the full
// 1000-trace sweep stays fast.
void check_sim_equivalence(const char *src, int traces, int cycles, uint32_t seed) {
    ModuleTree tree = parse_rtl(src);
    FlatNetlist net = elaborate(tree);
    const AstModule *top = tree.top_module();

    std::vector<int> inputs;
    for (const auto &s : net.signals)
        if (s.kind == SignalKind::InputPort && s.id != net.clock)
            inputs.push_back(s.id);

    std::mt19937_64 rng(seed);
    long mismatches = 0;
    long compared = 0;
    for (int t = 0; t < traces; t++) {
        NetSim ns(net);
        TreeSim ts(tree, top->name);
        for (int c = 0; c < cycles; c++) {
            for (int sig : inputs) {
                uint64_t v = rng();
                ns.set_value(sig, v);
                ts.set_input(net.signal(sig).name, mask_width(v, net.signal(sig).width));
            }
            ns.eval_comb();
            ts.settle();
            for (const auto &[name, expected] : ts.all_values()) {
                int id = net.find_signal(name);
                REQUIRE(id >= 0);
                if (id == net.clock)
                    continue;
                compared++;
                mismatches += ns.value(id) != expected;
            }
            for (const auto &[name, words] : ts.all_memories()) {
                int id = net.find_signal(name);
                REQUIRE(id >= 0);
                for (size_t w = 0; w < words.size(); w++) {
                    compared++;
                    mismatches += ns.mem(id, w) != words[w];
                }
            }
            ns.clock_edge();
            ts.clock_edge();
        }
    }
    CHECK(mismatches == 0);
    CHECK(compared > 0);
}

} // namespace

TEST_CASE("flattening soundness: netlist sim matches tree interpreter") {
    const char *hier = R"(
module top(input clk, input en, input [7:0] a, input [7:0] b, output [7:0] y, output flag);
  wire [7:0] t;
  wire [7:0] u;
  stage s1(.clk(clk), .en(en), .d(a), .q(t));
  stage s2(.clk(clk), .en(en), .d(b), .q(u));
  assign y = t ^ u;
  assign flag = y[7] & en;
endmodule
module stage(input clk, input en, input [7:0] d, output [7:0] q);
  reg [7:0] r;
  reg [7:0] hist;
  assign q = r + hist;
  always @(posedge clk)
    if (en) begin
      r <= d;
      hist <= r;
    end
endmodule
)";
    check_sim_equivalence(hier, 1000, 20, 0xc0ffee);

    const char *casey = R"(
module m(input clk, input [2:0] s, input [7:0] a, input [7:0] b, output [7:0] y);
  reg [7:0] r;
  assign y = r;
  always @(posedge clk)
    case (s)
      3'h0: r <= a;
      3'h2, 3'h5: r <= b;
      3'h3: r <= a ^ b;
      default: r <= r + 8'h1;
    endcase
endmodule
)";
    check_sim_equivalence(casey, 1000, 20, 0xbeef);

    const char *memory = R"(
module m(input clk, input we, input [2:0] wa, input [2:0] ra, input [7:0] wd, output [7:0] rd);
  reg [7:0] store [7:0];
  assign rd = store[ra];
  always @(posedge clk)
    if (we)
      store[wa] <= wd;
endmodule
)";
    check_sim_equivalence(memory, 1000, 20, 0x1234);

    const char *blocking = R"(
module m(input clk, input [7:0] a, input [7:0] b, input pick, output [7:0] y);
  reg [7:0] t;
  reg [7:0] r;
  assign y = r;
  always @(posedge clk) begin
    t = a + b;
    if (pick)
      t = a - b;
    r <= t ^ 8'h5a;
  end
endmodule
)";
    check_sim_equivalence(blocking, 1000, 20, 0x777);
}

TEST_CASE("undriven outputs error unless declared unused") {
    const char *src = R"(
module m(input clk, input a, output y, output dbg);
  assign y = a;
endmodule
)";
    CHECK_THROWS_WITH_AS(elaborate(parse_rtl(src)), doctest::Contains("never assigned"),
                         InputError);
    ElabOptions opts;
    opts.unused_outputs = {"dbg"};
    FlatNetlist net = elaborate(parse_rtl(src), opts);
    CHECK(net.find_signal("m.dbg") >= 0);
}
