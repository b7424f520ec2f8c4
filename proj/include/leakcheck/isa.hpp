#pragma once

#include <cstdint>
#include <string>

#include "leakcheck/expr.hpp"

namespace leakcheck {

// Fixture ISA: a word-aligned RV32I subset plus a key-memory load and a
// hardware-loop setup.
//
//   lui, addi/xori/ori/andi, slli/srli/srai, add/sub/xor/or/and/sll/srl/sra,
//   lw, sw, beq/bne/blt/bge/bltu/bgeu,
//   jal rd in {x0, x1}            (x1: call, x0: plain jump)
//   jalr x0, 0(x1)                (return, the only jalr form)
//   ldk rd, imm(rs1)              (custom-0: load a key-memory word)
//   hlp rs1, imm                  (custom-1: hardware loop; count = rs1 byte,
//                                  start = pc+4, end = pc+imm)
//
// Everything else, including the all-zeros word, decodes as illegal.

enum class InstrClass { Alu, Load, Store, LoadKey, Branch, Jump, Call, Return, HwLoop, Illegal };

struct Instruction {
    uint32_t encoding = 0;
    InstrClass cls = InstrClass::Illegal;
    std::string mnemonic = "illegal";
    int rd = 0, rs1 = 0, rs2 = 0;
    int32_t imm = 0;

    std::string text() const; // mnemonic with operands
};

// Total and deterministic; unknown patterns yield class Illegal.
Instruction decode(uint32_t word);

const char *instr_class_name(InstrClass cls);

// The decoder's legality as a Boolean formula over a 32-bit instruction
// expression (the program-memory read port); agrees with decode() exactly.
Expr legal_instruction_expr(const Expr &instr_word);

} // namespace leakcheck
