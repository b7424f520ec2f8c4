#include "sere_support.hpp"

#include <unordered_map>

namespace sere_test {

using namespace leakcheck;

namespace {

class LetterEnv : public EvalEnv {
public:
    explicit LetterEnv(int letter) : letter_(letter) {}
    uint64_t signal_value(int) const override { return 0; }
    uint64_t mem_word(int, uint64_t) const override { return 0; }
    uint64_t aux_value(const std::string &name) const override {
        int idx = name[1] - '0';
        return (letter_ >> idx) & 1;
    }

private:
    int letter_;
};

uint64_t pow8(int l) {
    uint64_t v = 1;
    for (int i = 0; i < l; i++)
        v *= kLetters;
    return v;
}

} // namespace

bool guard_on_letter(const Expr &g, int letter) {
    LetterEnv env(letter);
    return eval_expr(g, env) != 0;
}

std::vector<Seq> enumerate_seqs(int max_nodes) {
    // by_size[n] = all sequences with exactly n nodes
    std::vector<std::vector<Seq>> by_size(max_nodes + 1);
    for (int i = 0; i < kAtoms; i++)
        by_size[1].push_back(s_atom(atom_exprs()[i]));
    if (max_nodes >= 2)
        for (const auto &a : by_size[1])
            by_size[2].push_back(s_repinf(a));
    for (int n = 3; n <= max_nodes; n++) {
        for (int la = 1; la <= n - 2; la++) {
            int lb = n - 1 - la;
            for (const auto &a : by_size[la])
                for (const auto &b : by_size[lb]) {
                    by_size[n].push_back(s_concat(a, b));
                    by_size[n].push_back(s_fuse(a, b));
                }
        }
    }
    std::vector<Seq> all;
    for (const auto &bucket : by_size)
        for (const auto &s : bucket)
            all.push_back(s);
    return all;
}

TraceLang empty_lang(int max_len) {
    TraceLang lang;
    lang.max_len = max_len;
    lang.sets.resize(max_len + 1);
    for (int l = 0; l <= max_len; l++)
        lang.sets[l].assign((pow8(l) + 63) / 64, 0);
    return lang;
}

namespace {

// dest |= src shifted left by (offset * 8^src_len) "trace places"; blocks of
// 8^src_len bits are word-aligned once src_len >= 2.
void or_block(std::vector<uint64_t> &dest, const std::vector<uint64_t> &src, uint64_t offset_traces,
              int src_len) {
    uint64_t bits = pow8(src_len);
    uint64_t bit_offset = offset_traces * bits;
    if (bits >= 64) {
        size_t word_offset = bit_offset >> 6;
        for (size_t i = 0; i < src.size(); i++)
            dest[word_offset + i] |= src[i];
        return;
    }
    for (uint64_t b = 0; b < bits; b++)
        if ((src[b >> 6] >> (b & 63)) & 1)
            dest[(bit_offset + b) >> 6] |= uint64_t{1} << ((bit_offset + b) & 63);
}

void for_each_bit(const std::vector<uint64_t> &set, const std::function<void(uint64_t)> &fn) {
    for (size_t w = 0; w < set.size(); w++) {
        uint64_t word = set[w];
        while (word) {
            int b = __builtin_ctzll(word);
            word &= word - 1;
            fn((static_cast<uint64_t>(w) << 6) | static_cast<unsigned>(b));
        }
    }
}

TraceLang lang_atom(const Expr &cond, int max_len) {
    TraceLang lang = empty_lang(max_len);
    if (max_len >= 1)
        for (int m = 0; m < kLetters; m++)
            if (guard_on_letter(cond, m))
                lang.set(1, m);
    return lang;
}

TraceLang lang_concat(const TraceLang &a, const TraceLang &b, int max_len) {
    TraceLang out = empty_lang(max_len);
    for (int l = 0; l <= max_len; l++) {
        for (int la = 0; la <= l; la++) {
            int lb = l - la;
            if (a.sets[la].empty() && la > 0)
                continue;
            const auto &A = a.sets[la];
            const auto &B = b.sets[lb];
            bool a_any = false, b_any = false;
            for (uint64_t w : A)
                a_any |= w != 0;
            for (uint64_t w : B)
                b_any |= w != 0;
            if (!a_any || !b_any)
                continue;
            if (lb == 0) {
                for (size_t i = 0; i < A.size(); i++)
                    out.sets[l][i] |= A[i];
                continue;
            }
            auto &dest = out.sets[l];
            for_each_bit(A, [&](uint64_t u) { or_block(dest, B, u, lb); });
        }
    }
    return out;
}

TraceLang lang_fuse(const TraceLang &a, const TraceLang &b, int max_len) {
    TraceLang out = empty_lang(max_len);
    for (int l = 1; l <= max_len; l++) {
        for (int la = 1; la <= l; la++) {
            int lb = l - la + 1;
            if (lb < 1 || lb > max_len)
                continue;
            const auto &A = a.sets[la];
            const auto &B = b.sets[lb];
            // Partition B by first letter; suffixes have length lb-1.
            uint64_t suffix_traces = pow8(lb - 1);
            std::vector<std::vector<uint64_t>> by_first(
                kLetters, std::vector<uint64_t>((suffix_traces + 63) / 64, 0));
            for_each_bit(B, [&](uint64_t idx) {
                int first = static_cast<int>(idx / suffix_traces);
                uint64_t suffix = idx % suffix_traces;
                by_first[first][suffix >> 6] |= uint64_t{1} << (suffix & 63);
            });
            auto &dest = out.sets[l];
            for_each_bit(A, [&](uint64_t u) {
                int last = static_cast<int>(u % kLetters);
                bool any = false;
                for (uint64_t w : by_first[last])
                    any |= w != 0;
                if (!any)
                    return;
                or_block(dest, by_first[last], u, lb - 1);
            });
        }
    }
    return out;
}

TraceLang lang_repinf_atom(const Expr &cond, int max_len) {
    // all-cycles-satisfy languages, including the empty trace
    TraceLang lang = empty_lang(max_len);
    lang.set(0, 0);
    bool ok[kLetters];
    for (int m = 0; m < kLetters; m++)
        ok[m] = guard_on_letter(cond, m);
    for (int l = 1; l <= max_len; l++) {
        for_each_bit(lang.sets[l - 1], [&](uint64_t idx) {
            for (int m = 0; m < kLetters; m++)
                if (ok[m])
                    lang.set(l, idx * kLetters + m);
        });
    }
    return lang;
}

} // namespace

TraceLang lang_of_seq(const Seq &s, int max_len) {
    switch (s->op) {
    case leakcheck::SeqOp::Atom:
        return lang_atom(s->atom, max_len);
    case leakcheck::SeqOp::Concat:
        return lang_concat(lang_of_seq(s->a, max_len), lang_of_seq(s->b, max_len), max_len);
    case leakcheck::SeqOp::Fuse:
        return lang_fuse(lang_of_seq(s->a, max_len), lang_of_seq(s->b, max_len), max_len);
    case leakcheck::SeqOp::RepInf:
        return lang_repinf_atom(s->a->atom, max_len);
    }
    throw leakcheck::InputError("bad seq");
}

TraceLang lang_of_monitor(const Monitor &m, int max_len) {
    TraceLang lang = empty_lang(max_len);
    if (m.accepts_empty())
        lang.set(0, 0);

    // Per-state per-letter successor masks; subset transition via per-state OR.
    int n = m.num_states;
    std::vector<std::vector<uint32_t>> succ(n, std::vector<uint32_t>(kLetters, 0));
    for (const auto &e : m.edges)
        for (int letter = 0; letter < kLetters; letter++)
            if (guard_on_letter(e.guard, letter))
                succ[e.from][letter] |= uint32_t{1} << e.to;
    uint32_t acc_mask = 0;
    for (int s = 0; s < n; s++)
        if (m.accepting[s])
            acc_mask |= uint32_t{1} << s;

    struct Frame {
        uint32_t subset;
        uint64_t idx;
    };
    // Iterative DFS over the trace tree.
    std::vector<std::vector<Frame>> stack(max_len + 1);
    stack[0].push_back({uint32_t{1} << m.start, 0});
    for (int l = 0; l < max_len; l++) {
        for (const auto &f : stack[l]) {
            for (int letter = 0; letter < kLetters; letter++) {
                uint32_t next = 0;
                uint32_t bits = f.subset;
                while (bits) {
                    int s = __builtin_ctz(bits);
                    bits &= bits - 1;
                    next |= succ[s][letter];
                }
                uint64_t idx = f.idx * kLetters + letter;
                if (next & acc_mask)
                    lang.set(l + 1, idx);
                stack[l + 1].push_back({next, idx});
            }
        }
    }
    return lang;
}

bool matches_trace(const Seq &s, const std::vector<int> &letters) {
    leakcheck::AtomEval eval = [&](const Expr &g, int cycle) {
        return guard_on_letter(g, letters[cycle]);
    };
    return leakcheck::seq_matches(s, eval, 0, static_cast<int>(letters.size()) - 1);
}

} // namespace sere_test
