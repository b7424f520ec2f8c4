#include "doctest.h"

#include "fixture_support.hpp"
#include "leakcheck/isa.hpp"

#include <random>
#include <set>

using namespace leakcheck;

TEST_CASE("decode: canonical no-op and the all-zeros word") {
    Instruction nop = decode(0x00000013);
    CHECK(nop.cls == InstrClass::Alu);
    CHECK(nop.text() == "addi x0, x0, 0");

    CHECK(decode(0x00000000).cls == InstrClass::Illegal);
    CHECK(decode(0xffffffff).cls == InstrClass::Illegal);
    // fence and ecall are outside the fixture subset
    CHECK(decode(0x0000000f).cls == InstrClass::Illegal);
    CHECK(decode(0x00000073).cls == InstrClass::Illegal);
}

TEST_CASE("decode: fixture-specific instructions") {
    // ldk x7, 0(x6): custom-0, funct3=010
    uint32_t ldk = (6u << 15) | (2u << 12) | (7u << 7) | 0x0b;
    Instruction i = decode(ldk);
    CHECK(i.cls == InstrClass::LoadKey);
    CHECK(i.text() == "ldk x7, 0(x6)");

    // hlp x5, 16: custom-1, funct3=000, rd=0
    uint32_t hlp = (16u << 20) | (5u << 15) | 0x2b;
    CHECK(decode(hlp).cls == InstrClass::HwLoop);
    // rd != 0 makes it illegal
    CHECK(decode(hlp | (1u << 7)).cls == InstrClass::Illegal);

    // jal x1 = call, jal x0 = jump, jal x5 = illegal in this subset
    CHECK(decode(0x008000ef).cls == InstrClass::Call);
    CHECK(decode(0x0080006f).cls == InstrClass::Jump);
    CHECK(decode(0x008002ef).cls == InstrClass::Illegal);

    // only the plain return form of jalr is legal
    CHECK(decode(0x00008067).cls == InstrClass::Return);
    CHECK(decode(0x00008167).cls == InstrClass::Illegal); // rd=x2
    CHECK(decode(0x00010067).cls == InstrClass::Illegal); // rs1=x2
    CHECK(decode(0x00408067).cls == InstrClass::Illegal); // imm!=0
}

TEST_CASE("decode is total and the legality formula agrees exactly") {
    FlatNetlist scratch;
    SignalDecl d;
    d.name = "w";
    d.width = 32;
    d.kind = SignalKind::InputPort;
    int sig = scratch.add_signal(d);
    Expr legal = legal_instruction_expr(e_signal(sig, 31, 0));

    class WordEnv : public EvalEnv {
    public:
        uint64_t word = 0;
        uint64_t signal_value(int) const override { return word; }
        uint64_t mem_word(int, uint64_t) const override { return 0; }
    } env;

    auto agree = [&](uint32_t w) {
        env.word = w;
        bool formula = eval_expr(legal, env) != 0;
        bool decoder = decode(w).cls != InstrClass::Illegal;
        return formula == decoder;
    };

    std::mt19937 rng(0x15a15a);
    int mismatches = 0;
    for (int i = 0; i < 100000; i++)
        mismatches += agree(static_cast<uint32_t>(rng())) ? 0 : 1;
    // sweep every opcode/funct combination with zero register fields
    for (uint32_t op = 0; op < 128; op++)
        for (uint32_t f3 = 0; f3 < 8; f3++)
            for (uint32_t f7 : {0u, 0x20u, 1u})
                mismatches += agree(op | (f3 << 12) | (f7 << 25)) ? 0 : 1;
    CHECK(mismatches == 0);
}

TEST_CASE("assembler: image, encodings and metadata for the naive program") {
    ProgramImage img = assemble(fixture::read_file("fixtures/programs/naive.s"));
    CHECK(img.words.size() == 34);
    CHECK(img.entry == 0);

    // every emitted word decodes legally and matches its source mnemonic class
    for (const auto &[addr, word] : img.words)
        CHECK(decode(word).cls != InstrClass::Illegal);

    // decode is injective on this program's distinct encodings
    std::set<std::string> texts;
    for (uint32_t enc : img.distinct_encodings())
        texts.insert(decode(enc).text());
    CHECK(texts.size() == img.distinct_encodings().size());

    CHECK(img.call_sites.size() == 4);
    CHECK(img.call_sites[0].callee == "app_main");
    CHECK(img.call_sites[0].return_addr == img.call_sites[0].call_addr + 4);
    REQUIRE(img.hwloops.size() == 1);
    CHECK(img.hwloops[0].start == img.hwloops[0].setup_addr + 4);
    CHECK(img.hwloops[0].end > img.hwloops[0].start);

    CHECK(img.static_call_depth() == 4);
    CHECK(assemble(fixture::read_file("fixtures/programs/patched.s")).static_call_depth() == 2);

    // symbols cover every word
    for (const auto &[addr, word] : img.words)
        CHECK(img.symbols.count(addr) == 1);
}

TEST_CASE("assembler: li expansion and define overrides") {
    ProgramImage small = assemble("entry:\n li t0, 42\n");
    REQUIRE(small.words.size() == 1);
    Instruction i = decode(small.words.at(0));
    CHECK(i.text() == "addi x5, x0, 42");

    ProgramImage big = assemble("entry:\n li t0, 0x12345678\n");
    REQUIRE(big.words.size() == 2);
    CHECK(decode(big.words.at(0)).mnemonic == "lui");
    CHECK(decode(big.words.at(4)).mnemonic == "addi");

    ProgramImage defd = assemble(".equ V, 5\nentry:\n li t0, V\n", {{"V", 99}});
    CHECK(decode(defd.words.at(0)).imm == 99);
}

TEST_CASE("program image round trip through hex + metadata files") {
    ProgramImage img = assemble(fixture::read_file("fixtures/programs/naive.s"));
    save_program(img, "/tmp/lc_test_img.hex", "/tmp/lc_test_img.meta.json");
    ProgramImage back = load_program("/tmp/lc_test_img.hex", "/tmp/lc_test_img.meta.json");
    CHECK(back.words == img.words);
    CHECK(back.entry == img.entry);
    CHECK(back.call_sites.size() == img.call_sites.size());
    CHECK(back.hwloops.size() == img.hwloops.size());
    CHECK(back.symbols == img.symbols);
    CHECK(back.functions == img.functions);
    CHECK(back.has_metadata);

    // bare image without a sidecar still loads, but is flagged
    ProgramImage bare = load_program("/tmp/lc_test_img.hex", "/tmp/lc_no_such_meta.json");
    CHECK_FALSE(bare.has_metadata);
    CHECK(bare.words == img.words);
}
