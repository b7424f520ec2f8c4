#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leakcheck/diag.hpp"

namespace leakcheck {

enum class Tok {
    End,
    Ident,
    Number, // raw text kept for base/size parsing
    Punct,  // one of the fixed operator/punctuation strings
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceLoc loc;

    bool is(Tok k) const { return kind == k; }
    bool is_punct(const char *p) const { return kind == Tok::Punct && text == p; }
    bool is_ident(const char *s) const { return kind == Tok::Ident && text == s; }
};

struct LexOptions {
    // PSL property text uses hierarchical (dotted) identifiers; RTL source
    // does not.
    bool dotted_idents = false;
};

// Tokenizes the full input; throws InputError on bad characters or
// malformed numbers (x/z digits included).
std::vector<Token> lex(const std::string &text, const LexOptions &opts = {});

struct ParsedNumber {
    uint64_t value = 0;
    int width = 0; // 0 = unsized decimal
};

ParsedNumber parse_number_token(const Token &tok);

} // namespace leakcheck
