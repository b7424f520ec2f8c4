#include "leakcheck/isa.hpp"

#include <sstream>

namespace leakcheck {

namespace {

int32_t imm_i(uint32_t w) { return static_cast<int32_t>(w) >> 20; }
int32_t imm_s(uint32_t w) {
    return (static_cast<int32_t>(w) >> 20 & ~0x1f) | static_cast<int32_t>((w >> 7) & 0x1f);
}
int32_t imm_b(uint32_t w) {
    int32_t v = 0;
    v |= static_cast<int32_t>((w >> 31) & 1) << 12;
    v |= static_cast<int32_t>((w >> 7) & 1) << 11;
    v |= static_cast<int32_t>((w >> 25) & 0x3f) << 5;
    v |= static_cast<int32_t>((w >> 8) & 0xf) << 1;
    return (v << 19) >> 19;
}
int32_t imm_u(uint32_t w) { return static_cast<int32_t>(w & 0xfffff000); }
int32_t imm_j(uint32_t w) {
    int32_t v = 0;
    v |= static_cast<int32_t>((w >> 31) & 1) << 20;
    v |= static_cast<int32_t>((w >> 12) & 0xff) << 12;
    v |= static_cast<int32_t>((w >> 20) & 1) << 11;
    v |= static_cast<int32_t>((w >> 21) & 0x3ff) << 1;
    return (v << 11) >> 11;
}

} // namespace

Instruction decode(uint32_t w) {
    Instruction out;
    out.encoding = w;
    out.rd = static_cast<int>((w >> 7) & 0x1f);
    out.rs1 = static_cast<int>((w >> 15) & 0x1f);
    out.rs2 = static_cast<int>((w >> 20) & 0x1f);
    uint32_t op = w & 0x7f;
    uint32_t f3 = (w >> 12) & 7;
    uint32_t f7 = (w >> 25) & 0x7f;

    auto set = [&](InstrClass cls, const char *mn, int32_t imm) {
        out.cls = cls;
        out.mnemonic = mn;
        out.imm = imm;
    };

    switch (op) {
    case 0x37:
        set(InstrClass::Alu, "lui", imm_u(w));
        return out;
    case 0x13:
        switch (f3) {
        case 0: set(InstrClass::Alu, "addi", imm_i(w)); return out;
        case 4: set(InstrClass::Alu, "xori", imm_i(w)); return out;
        case 6: set(InstrClass::Alu, "ori", imm_i(w)); return out;
        case 7: set(InstrClass::Alu, "andi", imm_i(w)); return out;
        case 1:
            if (f7 == 0) {
                set(InstrClass::Alu, "slli", out.rs2);
                return out;
            }
            break;
        case 5:
            if (f7 == 0) {
                set(InstrClass::Alu, "srli", out.rs2);
                return out;
            }
            if (f7 == 0x20) {
                set(InstrClass::Alu, "srai", out.rs2);
                return out;
            }
            break;
        }
        break;
    case 0x33:
        if (f7 == 0) {
            switch (f3) {
            case 0: set(InstrClass::Alu, "add", 0); return out;
            case 1: set(InstrClass::Alu, "sll", 0); return out;
            case 4: set(InstrClass::Alu, "xor", 0); return out;
            case 5: set(InstrClass::Alu, "srl", 0); return out;
            case 6: set(InstrClass::Alu, "or", 0); return out;
            case 7: set(InstrClass::Alu, "and", 0); return out;
            }
        } else if (f7 == 0x20) {
            if (f3 == 0) {
                set(InstrClass::Alu, "sub", 0);
                return out;
            }
            if (f3 == 5) {
                set(InstrClass::Alu, "sra", 0);
                return out;
            }
        }
        break;
    case 0x03:
        if (f3 == 2) {
            set(InstrClass::Load, "lw", imm_i(w));
            return out;
        }
        break;
    case 0x23:
        if (f3 == 2) {
            set(InstrClass::Store, "sw", imm_s(w));
            return out;
        }
        break;
    case 0x63:
        switch (f3) {
        case 0: set(InstrClass::Branch, "beq", imm_b(w)); return out;
        case 1: set(InstrClass::Branch, "bne", imm_b(w)); return out;
        case 4: set(InstrClass::Branch, "blt", imm_b(w)); return out;
        case 5: set(InstrClass::Branch, "bge", imm_b(w)); return out;
        case 6: set(InstrClass::Branch, "bltu", imm_b(w)); return out;
        case 7: set(InstrClass::Branch, "bgeu", imm_b(w)); return out;
        }
        break;
    case 0x6f:
        if (out.rd == 1) {
            set(InstrClass::Call, "jal", imm_j(w));
            return out;
        }
        if (out.rd == 0) {
            set(InstrClass::Jump, "jal", imm_j(w));
            return out;
        }
        break;
    case 0x67:
        if (f3 == 0 && out.rd == 0 && out.rs1 == 1 && (w >> 20) == 0) {
            set(InstrClass::Return, "jalr", 0);
            return out;
        }
        break;
    case 0x0b:
        if (f3 == 2) {
            set(InstrClass::LoadKey, "ldk", imm_i(w));
            return out;
        }
        break;
    case 0x2b:
        if (f3 == 0 && out.rd == 0) {
            set(InstrClass::HwLoop, "hlp", imm_i(w));
            return out;
        }
        break;
    }
    return out;
}

std::string Instruction::text() const {
    std::ostringstream os;
    os << mnemonic;
    switch (cls) {
    case InstrClass::Illegal:
        break;
    case InstrClass::Alu:
        if (mnemonic == "lui")
            os << " x" << rd << ", " << (imm >> 12);
        else if (mnemonic.back() == 'i')
            os << " x" << rd << ", x" << rs1 << ", " << imm;
        else
            os << " x" << rd << ", x" << rs1 << ", x" << rs2;
        break;
    case InstrClass::Load:
    case InstrClass::LoadKey:
        os << " x" << rd << ", " << imm << "(x" << rs1 << ")";
        break;
    case InstrClass::Store:
        os << " x" << rs2 << ", " << imm << "(x" << rs1 << ")";
        break;
    case InstrClass::Branch:
        os << " x" << rs1 << ", x" << rs2 << ", " << imm;
        break;
    case InstrClass::Jump:
    case InstrClass::Call:
        os << " x" << rd << ", " << imm;
        break;
    case InstrClass::Return:
        os << " x0, 0(x1)";
        break;
    case InstrClass::HwLoop:
        os << " x" << rs1 << ", " << imm;
        break;
    }
    return os.str();
}

const char *instr_class_name(InstrClass cls) {
    switch (cls) {
    case InstrClass::Alu: return "alu";
    case InstrClass::Load: return "load";
    case InstrClass::Store: return "store";
    case InstrClass::LoadKey: return "load-key";
    case InstrClass::Branch: return "branch";
    case InstrClass::Jump: return "jump";
    case InstrClass::Call: return "call";
    case InstrClass::Return: return "return";
    case InstrClass::HwLoop: return "hwloop";
    case InstrClass::Illegal: return "illegal";
    }
    return "?";
}

Expr legal_instruction_expr(const Expr &w) {
    if (w->width != 32)
        throw InputError("instruction expression must be 32 bits wide");
    auto slice = [&](int hi, int lo) {
        if (w->op == ExprOp::Signal)
            return e_signal(w->signal, w->lo + hi, w->lo + lo);
        // generic fallback: shift and mask
        Expr shifted = e_binop(ExprOp::Shr, w, e_const(lo, 32));
        return e_binop(ExprOp::And, shifted, e_const((uint64_t{1} << (hi - lo + 1)) - 1, 32));
    };
    auto eq = [&](Expr a, uint64_t v) { return e_binop(ExprOp::Eq, a, e_const(v, a->width)); };
    Expr op = slice(6, 0);
    Expr f3 = slice(14, 12);
    Expr f7 = slice(31, 25);
    Expr rd = slice(11, 7);
    Expr rs1 = slice(19, 15);

    auto f3_in = [&](std::initializer_list<uint64_t> vals) {
        Expr acc = e_false();
        for (uint64_t v : vals)
            acc = b_or(acc, eq(f3, v));
        return acc;
    };

    Expr legal = e_false();
    legal = b_or(legal, eq(op, 0x37)); // lui
    legal = b_or(legal, b_and(eq(op, 0x13), f3_in({0, 4, 6, 7})));
    legal = b_or(legal, b_and(eq(op, 0x13), b_and(eq(f3, 1), eq(f7, 0))));
    legal = b_or(legal, b_and(eq(op, 0x13),
                              b_and(eq(f3, 5), b_or(eq(f7, 0), eq(f7, 0x20)))));
    legal = b_or(legal, b_and(eq(op, 0x33), b_and(eq(f7, 0), f3_in({0, 1, 4, 5, 6, 7}))));
    legal = b_or(legal, b_and(eq(op, 0x33), b_and(eq(f7, 0x20), f3_in({0, 5}))));
    legal = b_or(legal, b_and(eq(op, 0x03), eq(f3, 2)));
    legal = b_or(legal, b_and(eq(op, 0x23), eq(f3, 2)));
    legal = b_or(legal, b_and(eq(op, 0x63), f3_in({0, 1, 4, 5, 6, 7})));
    legal = b_or(legal, b_and(eq(op, 0x6f), b_or(eq(rd, 0), eq(rd, 1))));
    legal = b_or(legal, b_and(eq(op, 0x67),
                              b_and(eq(f3, 0),
                                    b_and(eq(rd, 0), b_and(eq(rs1, 1), eq(slice(31, 20), 0))))));
    legal = b_or(legal, b_and(eq(op, 0x0b), eq(f3, 2)));
    legal = b_or(legal, b_and(eq(op, 0x2b), b_and(eq(f3, 0), eq(rd, 0))));
    return legal;
}

} // namespace leakcheck
