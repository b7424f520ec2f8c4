#include "leakcheck/program.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace leakcheck {

std::vector<uint32_t> ProgramImage::distinct_encodings() const {
    std::set<uint32_t> s;
    for (const auto &[addr, w] : words)
        s.insert(w);
    return {s.begin(), s.end()};
}

int ProgramImage::static_call_depth() const {
    if (call_sites.empty())
        return 0;
    // Segment the image into functions: entry plus every called label.
    std::map<uint32_t, std::string> starts;
    starts[entry] = "<entry>";
    for (const auto &[name, addr] : functions)
        starts[addr] = name;
    auto owner = [&](uint32_t addr) {
        auto it = starts.upper_bound(addr);
        if (it == starts.begin())
            return std::string("<entry>");
        return std::prev(it)->second;
    };
    std::map<std::string, std::set<std::string>> graph;
    for (const auto &cs : call_sites)
        graph[owner(cs.call_addr)].insert(cs.callee);

    std::map<std::string, int> memo;
    std::set<std::string> on_path;
    std::function<int(const std::string &)> longest = [&](const std::string &f) -> int {
        auto m = memo.find(f);
        if (m != memo.end())
            return m->second;
        if (on_path.count(f))
            throw InputError("recursive call graph; static call depth is unbounded");
        on_path.insert(f);
        int best = 0;
        auto it = graph.find(f);
        if (it != graph.end())
            for (const auto &callee : it->second)
                best = std::max(best, 1 + longest(callee));
        on_path.erase(f);
        memo[f] = best;
        return best;
    };
    return longest(owner(entry));
}

namespace {

int reg_number(const std::string &name, SourceLoc loc) {
    static const std::map<std::string, int> abi = {
        {"zero", 0}, {"ra", 1},  {"sp", 2},  {"gp", 3},  {"tp", 4},  {"t0", 5},  {"t1", 6},
        {"t2", 7},   {"s0", 8},  {"fp", 8},  {"s1", 9},  {"a0", 10}, {"a1", 11}, {"a2", 12},
        {"a3", 13},  {"a4", 14}, {"a5", 15}, {"a6", 16}, {"a7", 17}, {"s2", 18}, {"s3", 19},
        {"s4", 20},  {"s5", 21}, {"s6", 22}, {"s7", 23}, {"s8", 24}, {"s9", 25}, {"s10", 26},
        {"s11", 27}, {"t3", 28}, {"t4", 29}, {"t5", 30}, {"t6", 31},
    };
    if (name.size() >= 2 && name[0] == 'x') {
        bool digits = true;
        for (size_t i = 1; i < name.size(); i++)
            digits &= std::isdigit(static_cast<unsigned char>(name[i])) != 0;
        if (digits) {
            int n = std::stoi(name.substr(1));
            if (n >= 0 && n <= 31)
                return n;
        }
    }
    auto it = abi.find(name);
    if (it != abi.end())
        return it->second;
    throw InputError(loc, "unknown register '" + name + "'");
}

struct AsmLine {
    int number = 0;
    std::string text;                // original (trimmed)
    std::vector<std::string> labels; // labels defined on this line
    std::string op;
    std::vector<std::string> args;
};

struct Encoder {
    static uint32_t r_type(uint32_t f7, int rs2, int rs1, uint32_t f3, int rd, uint32_t op) {
        return (f7 << 25) | (static_cast<uint32_t>(rs2) << 20) |
               (static_cast<uint32_t>(rs1) << 15) | (f3 << 12) |
               (static_cast<uint32_t>(rd) << 7) | op;
    }
    static uint32_t i_type(int32_t imm, int rs1, uint32_t f3, int rd, uint32_t op) {
        return (static_cast<uint32_t>(imm & 0xfff) << 20) | (static_cast<uint32_t>(rs1) << 15) |
               (f3 << 12) | (static_cast<uint32_t>(rd) << 7) | op;
    }
    static uint32_t s_type(int32_t imm, int rs2, int rs1, uint32_t f3, uint32_t op) {
        return (static_cast<uint32_t>((imm >> 5) & 0x7f) << 25) |
               (static_cast<uint32_t>(rs2) << 20) | (static_cast<uint32_t>(rs1) << 15) |
               (f3 << 12) | (static_cast<uint32_t>(imm & 0x1f) << 7) | op;
    }
    static uint32_t b_type(int32_t imm, int rs2, int rs1, uint32_t f3, uint32_t op) {
        uint32_t u = static_cast<uint32_t>(imm);
        return (((u >> 12) & 1) << 31) | (((u >> 5) & 0x3f) << 25) |
               (static_cast<uint32_t>(rs2) << 20) | (static_cast<uint32_t>(rs1) << 15) |
               (f3 << 12) | (((u >> 1) & 0xf) << 8) | (((u >> 11) & 1) << 7) | op;
    }
    static uint32_t u_type(int32_t imm20, int rd, uint32_t op) {
        return (static_cast<uint32_t>(imm20 & 0xfffff) << 12) |
               (static_cast<uint32_t>(rd) << 7) | op;
    }
    static uint32_t j_type(int32_t imm, int rd, uint32_t op) {
        uint32_t u = static_cast<uint32_t>(imm);
        return (((u >> 20) & 1) << 31) | (((u >> 1) & 0x3ff) << 21) | (((u >> 11) & 1) << 20) |
               (((u >> 12) & 0xff) << 12) | (static_cast<uint32_t>(rd) << 7) | op;
    }
};

class Assembler {
public:
    Assembler(const std::string &source, const std::map<std::string, uint64_t> &defines)
        : defines_(defines) {
        std::istringstream is(source);
        std::string raw;
        int number = 0;
        while (std::getline(is, raw)) {
            number++;
            std::string text = raw;
            size_t hash = std::min(text.find('#'), text.find("//"));
            if (hash != std::string::npos)
                text = text.substr(0, hash);
            AsmLine line;
            line.number = number;
            // labels
            for (;;) {
                size_t colon = text.find(':');
                if (colon == std::string::npos)
                    break;
                std::string head = trim(text.substr(0, colon));
                if (head.empty() || head.find_first_of(" \t") != std::string::npos)
                    break;
                line.labels.push_back(head);
                text = text.substr(colon + 1);
            }
            text = trim(text);
            if (!text.empty()) {
                size_t sp = text.find_first_of(" \t");
                line.op = text.substr(0, sp);
                if (sp != std::string::npos) {
                    std::string rest = text.substr(sp + 1);
                    std::string arg;
                    int paren = 0;
                    for (char c : rest) {
                        if (c == '(')
                            paren++;
                        if (c == ')')
                            paren--;
                        if (c == ',' && paren == 0) {
                            line.args.push_back(trim(arg));
                            arg.clear();
                        } else {
                            arg += c;
                        }
                    }
                    if (!trim(arg).empty())
                        line.args.push_back(trim(arg));
                }
                std::string pretty = line.op;
                for (size_t i = 0; i < line.args.size(); i++)
                    pretty += (i ? ", " : " ") + line.args[i];
                line.text = pretty;
            }
            lines_.push_back(std::move(line));
        }
    }

    ProgramImage run() {
        layout();
        emit();
        return std::move(img_);
    }

private:
    std::map<std::string, uint64_t> defines_;
    std::vector<AsmLine> lines_;
    std::map<std::string, uint32_t> labels_;
    std::map<std::string, int64_t> equs_;
    ProgramImage img_;

    static std::string trim(const std::string &s) {
        size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos)
            return "";
        size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    SourceLoc loc(const AsmLine &l) const { return SourceLoc{l.number, 1}; }

    int64_t const_value(const std::string &text, SourceLoc where) {
        std::string t = trim(text);
        if (t.empty())
            throw InputError(where, "empty constant");
        bool neg = t[0] == '-';
        if (neg)
            t = t.substr(1);
        int64_t v;
        try {
            if (t.rfind("0x", 0) == 0 || t.rfind("0X", 0) == 0)
                v = static_cast<int64_t>(std::stoull(t.substr(2), nullptr, 16));
            else if (std::isdigit(static_cast<unsigned char>(t[0])))
                v = static_cast<int64_t>(std::stoull(t, nullptr, 10));
            else {
                auto def = defines_.find(t);
                if (def != defines_.end())
                    v = static_cast<int64_t>(def->second);
                else {
                    auto eq = equs_.find(t);
                    if (eq == equs_.end())
                        throw InputError(where, "unknown symbol '" + t + "'");
                    v = eq->second;
                }
            }
        } catch (const std::exception &) {
            throw InputError(where, "bad constant '" + text + "'");
        }
        return neg ? -v : v;
    }

    // number of words a statement occupies (for pass 1)
    int size_of(const AsmLine &l) {
        if (l.op.empty() || l.op == ".equ")
            return 0;
        if (l.op == ".word")
            return 1;
        if (l.op == "li") {
            int64_t v = const_value(l.args.at(1), loc(l));
            if (v >= -2048 && v <= 2047)
                return 1;
            int32_t lo = static_cast<int32_t>(v << 20 >> 20);
            return lo == 0 ? 1 : 2;
        }
        return 1;
    }

    void layout() {
        uint32_t pc = 0;
        // .equ first so sizes can use them regardless of position
        for (const auto &l : lines_)
            if (l.op == ".equ") {
                if (l.args.size() != 2)
                    throw InputError(loc(l), ".equ takes a name and a value");
                if (!defines_.count(l.args[0]))
                    equs_[l.args[0]] = const_value(l.args[1], loc(l));
                else
                    equs_[l.args[0]] = static_cast<int64_t>(defines_.at(l.args[0]));
            }
        for (const auto &l : lines_) {
            for (const auto &label : l.labels) {
                if (labels_.count(label))
                    throw InputError(loc(l), "duplicate label '" + label + "'");
                labels_[label] = pc;
            }
            pc += 4 * size_of(l);
        }
    }

    int64_t value_or_label(const std::string &text, SourceLoc where) {
        std::string t = trim(text);
        auto lab = labels_.find(t);
        if (lab != labels_.end())
            return lab->second;
        return const_value(t, where);
    }

    // "imm(reg)" operands
    std::pair<int32_t, int> mem_operand(const std::string &text, SourceLoc where) {
        size_t open = text.find('(');
        size_t close = text.rfind(')');
        if (open == std::string::npos || close == std::string::npos || close < open)
            throw InputError(where, "expected imm(reg), got '" + text + "'");
        std::string imm_text = trim(text.substr(0, open));
        int32_t imm = imm_text.empty()
                          ? 0
                          : static_cast<int32_t>(const_value(imm_text, where));
        int reg = reg_number(trim(text.substr(open + 1, close - open - 1)), where);
        if (imm < -2048 || imm > 2047)
            throw InputError(where, "memory offset out of range");
        return {imm, reg};
    }

    void put_word(uint32_t &pc, uint32_t word, const AsmLine &l) {
        img_.words[pc] = word;
        img_.symbols[pc] = "line " + std::to_string(l.number) + ": " + l.text;
        pc += 4;
    }

    void emit() {
        uint32_t pc = 0;
        for (const auto &l : lines_) {
            if (l.op.empty() || l.op == ".equ")
                continue;
            SourceLoc where = loc(l);
            auto arg = [&](size_t i) -> const std::string & {
                if (i >= l.args.size())
                    throw InputError(where, "missing operand");
                return l.args[i];
            };
            auto reg = [&](size_t i) { return reg_number(arg(i), where); };
            auto imm12 = [&](size_t i) {
                int64_t v = const_value(arg(i), where);
                if (v < -2048 || v > 2047)
                    throw InputError(where, "immediate out of range");
                return static_cast<int32_t>(v);
            };

            const std::string &op = l.op;
            if (op == ".word") {
                put_word(pc, static_cast<uint32_t>(const_value(arg(0), where)), l);
                continue;
            }
            if (op == "nop") {
                put_word(pc, 0x13, l);
                continue;
            }
            if (op == "li") {
                int64_t v = const_value(arg(1), where);
                int rd = reg(0);
                if (v >= -2048 && v <= 2047) {
                    put_word(pc, Encoder::i_type(static_cast<int32_t>(v), 0, 0, rd, 0x13), l);
                } else {
                    int32_t lo = static_cast<int32_t>(v << 20 >> 20);
                    int32_t hi = (static_cast<int32_t>(v) - lo) >> 12;
                    put_word(pc, Encoder::u_type(hi, rd, 0x37), l);
                    if (lo != 0)
                        put_word(pc, Encoder::i_type(lo, rd, 0, rd, 0x13), l);
                }
                continue;
            }
            if (op == "mv") {
                put_word(pc, Encoder::i_type(0, reg(1), 0, reg(0), 0x13), l);
                continue;
            }
            if (op == "addi" || op == "xori" || op == "ori" || op == "andi") {
                uint32_t f3 = op == "addi" ? 0 : op == "xori" ? 4 : op == "ori" ? 6 : 7;
                put_word(pc, Encoder::i_type(imm12(2), reg(1), f3, reg(0), 0x13), l);
                continue;
            }
            if (op == "slli" || op == "srli" || op == "srai") {
                int64_t sh = const_value(arg(2), where);
                if (sh < 0 || sh > 31)
                    throw InputError(where, "shift amount out of range");
                uint32_t f3 = op == "slli" ? 1 : 5;
                uint32_t f7 = op == "srai" ? 0x20 : 0;
                put_word(pc,
                         Encoder::r_type(f7, static_cast<int>(sh), reg(1), f3, reg(0), 0x13), l);
                continue;
            }
            if (op == "add" || op == "sub" || op == "xor" || op == "or" || op == "and" ||
                op == "sll" || op == "srl" || op == "sra") {
                uint32_t f3 = op == "add" || op == "sub" ? 0
                              : op == "xor"              ? 4
                              : op == "or"               ? 6
                              : op == "and"              ? 7
                              : op == "sll"              ? 1
                                                         : 5;
                uint32_t f7 = (op == "sub" || op == "sra") ? 0x20 : 0;
                put_word(pc, Encoder::r_type(f7, reg(2), reg(1), f3, reg(0), 0x33), l);
                continue;
            }
            if (op == "lui") {
                int64_t v = const_value(arg(1), where);
                put_word(pc, Encoder::u_type(static_cast<int32_t>(v), reg(0), 0x37), l);
                continue;
            }
            if (op == "lw" || op == "ldk") {
                auto [imm, base] = mem_operand(arg(1), where);
                put_word(pc, Encoder::i_type(imm, base, 2, reg(0), op == "lw" ? 0x03 : 0x0b), l);
                continue;
            }
            if (op == "sw") {
                auto [imm, base] = mem_operand(arg(1), where);
                put_word(pc, Encoder::s_type(imm, reg(0), base, 2, 0x23), l);
                continue;
            }
            if (op == "beq" || op == "bne" || op == "blt" || op == "bge" || op == "bltu" ||
                op == "bgeu") {
                uint32_t f3 = op == "beq"    ? 0
                              : op == "bne"  ? 1
                              : op == "blt"  ? 4
                              : op == "bge"  ? 5
                              : op == "bltu" ? 6
                                             : 7;
                int64_t target = value_or_label(arg(2), where);
                int32_t off = static_cast<int32_t>(target - pc);
                if (off < -4096 || off > 4095 || (off & 1))
                    throw InputError(where, "branch offset out of range");
                put_word(pc, Encoder::b_type(off, reg(1), reg(0), f3, 0x63), l);
                continue;
            }
            if (op == "jal" || op == "j" || op == "call") {
                int rd = op == "j" ? 0 : op == "call" ? 1 : reg(0);
                const std::string &target_arg = (op == "jal") ? arg(1) : arg(0);
                int64_t target = value_or_label(target_arg, where);
                int32_t off = static_cast<int32_t>(target - pc);
                if (off < -(1 << 20) || off >= (1 << 20) || (off & 1))
                    throw InputError(where, "jump offset out of range");
                if (rd == 1) {
                    ProgramImage::CallSite cs;
                    cs.call_addr = pc;
                    cs.callee = trim(target_arg);
                    cs.return_addr = pc + 4;
                    img_.call_sites.push_back(cs);
                    auto lab = labels_.find(cs.callee);
                    if (lab != labels_.end())
                        img_.functions[cs.callee] = lab->second;
                }
                put_word(pc, Encoder::j_type(off, rd, 0x6f), l);
                continue;
            }
            if (op == "jalr") {
                auto [imm, base] = mem_operand(arg(1), where);
                int rd = reg(0);
                if (rd != 0 || base != 1 || imm != 0)
                    throw InputError(where, "only 'jalr x0, 0(x1)' (return) is supported");
                put_word(pc, Encoder::i_type(0, 1, 0, 0, 0x67), l);
                continue;
            }
            if (op == "ret") {
                put_word(pc, Encoder::i_type(0, 1, 0, 0, 0x67), l);
                continue;
            }
            if (op == "hlp") {
                int64_t target = value_or_label(arg(1), where);
                int32_t off = static_cast<int32_t>(target - pc);
                if (off < -2048 || off > 2047)
                    throw InputError(where, "hardware loop end out of range");
                ProgramImage::HwLoop hl;
                hl.setup_addr = pc;
                hl.start = pc + 4;
                hl.end = pc + static_cast<uint32_t>(off);
                img_.hwloops.push_back(hl);
                put_word(pc, Encoder::i_type(off, reg(0), 0, 0, 0x2b), l);
                continue;
            }
            throw InputError(where, "unknown instruction '" + op + "'");
        }
        img_.entry = 0;
    }
};

} // namespace

ProgramImage assemble(const std::string &source,
                      const std::map<std::string, uint64_t> &defines) {
    Assembler a(source, defines);
    return a.run();
}

void save_program(const ProgramImage &img, const std::string &hex_path,
                  const std::string &meta_path) {
    std::ofstream hex(hex_path);
    for (const auto &[addr, word] : img.words) {
        char buf[32];
        snprintf(buf, sizeof buf, "@%08x %08x", addr, word);
        hex << buf << "\n";
    }
    nlohmann::json meta;
    meta["entry"] = img.entry;
    meta["call_sites"] = nlohmann::json::array();
    for (const auto &cs : img.call_sites)
        meta["call_sites"].push_back(
            {{"call_addr", cs.call_addr}, {"callee", cs.callee}, {"return_addr", cs.return_addr}});
    meta["hwloops"] = nlohmann::json::array();
    for (const auto &hl : img.hwloops)
        meta["hwloops"].push_back(
            {{"setup_addr", hl.setup_addr}, {"start", hl.start}, {"end", hl.end}});
    meta["symbols"] = nlohmann::json::object();
    for (const auto &[addr, text] : img.symbols)
        meta["symbols"][std::to_string(addr)] = text;
    meta["functions"] = nlohmann::json::object();
    for (const auto &[name, addr] : img.functions)
        meta["functions"][name] = addr;
    std::ofstream ms(meta_path);
    ms << meta.dump(2) << "\n";
}

ProgramImage load_program(const std::string &hex_path, const std::string &meta_path) {
    ProgramImage img;
    std::ifstream hex(hex_path);
    if (!hex)
        throw InputError("cannot open program image '" + hex_path + "'");
    std::string line;
    uint32_t addr = 0;
    int lineno = 0;
    while (std::getline(hex, line)) {
        lineno++;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            if (tok[0] == '@') {
                addr = static_cast<uint32_t>(std::stoul(tok.substr(1), nullptr, 16));
                continue;
            }
            img.words[addr] = static_cast<uint32_t>(std::stoul(tok, nullptr, 16));
            addr += 4;
        }
    }
    std::ifstream ms(meta_path);
    if (!ms) {
        img.has_metadata = false;
        return img;
    }
    nlohmann::json meta = nlohmann::json::parse(ms);
    img.entry = meta.value("entry", 0u);
    for (const auto &cs : meta.value("call_sites", nlohmann::json::array()))
        img.call_sites.push_back({cs.at("call_addr").get<uint32_t>(),
                                  cs.at("callee").get<std::string>(),
                                  cs.at("return_addr").get<uint32_t>()});
    for (const auto &hl : meta.value("hwloops", nlohmann::json::array()))
        img.hwloops.push_back({hl.at("setup_addr").get<uint32_t>(),
                               hl.at("start").get<uint32_t>(), hl.at("end").get<uint32_t>()});
    nlohmann::json symbols = meta.value("symbols", nlohmann::json::object());
    for (const auto &[key, value] : symbols.items())
        img.symbols[static_cast<uint32_t>(std::stoul(key))] = value.get<std::string>();
    nlohmann::json functions = meta.value("functions", nlohmann::json::object());
    for (const auto &[name, addr] : functions.items())
        img.functions[name] = addr.get<uint32_t>();
    return img;
}

} // namespace leakcheck
