#include "leakcheck/lexer.hpp"

#include <cctype>

namespace leakcheck {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Longest-match punctuation, longest first.
const char *kPuncts[] = {
    "[*]", ">>>", "<<", ">>", "&&", "||", "==", "!=", "<=", ">=", "(", ")", "[", "]",
    "{",   "}",   ";",  ",",  ".",  ":",  "?",  "=",  "<",  ">",  "+", "-", "&", "|",
    "^",   "~",   "!",  "@",  "#",  "*",  "/",
};

} // namespace

std::vector<Token> lex(const std::string &text, const LexOptions &opts) {
    std::vector<Token> out;
    size_t i = 0;
    int line = 1, col = 1;

    auto loc_here = [&]() { return SourceLoc{line, col}; };
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; k++) {
            if (text[i] == '\n') {
                line++;
                col = 1;
            } else {
                col++;
            }
            i++;
        }
    };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            SourceLoc start = loc_here();
            advance(2);
            bool closed = false;
            while (i + 1 < text.size()) {
                if (text[i] == '*' && text[i + 1] == '/') {
                    advance(2);
                    closed = true;
                    break;
                }
                advance(1);
            }
            if (!closed)
                throw InputError(start, "unterminated block comment");
            continue;
        }
        if (ident_start(c)) {
            SourceLoc loc = loc_here();
            size_t start = i;
            while (i < text.size() && ident_char(text[i]))
                advance(1);
            if (opts.dotted_idents) {
                while (i + 1 < text.size() && text[i] == '.' && ident_start(text[i + 1])) {
                    advance(1);
                    while (i < text.size() && ident_char(text[i]))
                        advance(1);
                }
            }
            out.push_back({Tok::Ident, text.substr(start, i - start), loc});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
            SourceLoc loc = loc_here();
            size_t start = i;
            while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_'))
                advance(1);
            if (i < text.size() && text[i] == '\'') {
                advance(1);
                if (i >= text.size())
                    throw InputError(loc, "truncated based literal");
                char base = static_cast<char>(std::tolower(text[i]));
                if (base != 'b' && base != 'd' && base != 'h' && base != 'o')
                    throw InputError(loc_here(),
                                     std::string("unsupported literal base '") + text[i] + "'");
                advance(1);
                size_t digits = 0;
                while (i < text.size() &&
                       (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
                    char d = static_cast<char>(std::tolower(text[i]));
                    if (d == 'x' || d == 'z')
                        throw InputError(loc_here(),
                                         "x/z digits are not supported (two-valued semantics)");
                    advance(1);
                    digits++;
                }
                if (digits == 0)
                    throw InputError(loc, "based literal without digits");
            }
            out.push_back({Tok::Number, text.substr(start, i - start), loc});
            continue;
        }
        bool matched = false;
        for (const char *p : kPuncts) {
            size_t n = std::char_traits<char>::length(p);
            if (text.compare(i, n, p) == 0) {
                out.push_back({Tok::Punct, p, loc_here()});
                advance(n);
                matched = true;
                break;
            }
        }
        if (!matched)
            throw InputError(loc_here(), std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", loc_here()});
    return out;
}

ParsedNumber parse_number_token(const Token &tok) {
    const std::string &t = tok.text;
    ParsedNumber out;
    size_t quote = t.find('\'');
    auto digits_of = [&](const std::string &s, int base) {
        uint64_t v = 0;
        for (char raw : s) {
            if (raw == '_')
                continue;
            char c = static_cast<char>(std::tolower(raw));
            int d;
            if (c >= '0' && c <= '9')
                d = c - '0';
            else if (c >= 'a' && c <= 'f')
                d = 10 + (c - 'a');
            else
                throw InputError(tok.loc, "bad digit in literal");
            if (d >= base)
                throw InputError(tok.loc, "digit out of range for base");
            v = v * base + d;
        }
        return v;
    };
    if (quote == std::string::npos) {
        out.value = digits_of(t, 10);
        out.width = 0;
        return out;
    }
    std::string size_text = t.substr(0, quote);
    if (size_text.empty())
        throw InputError(tok.loc, "literal requires an explicit size");
    int width = static_cast<int>(digits_of(size_text, 10));
    if (width < 1 || width > 64)
        throw InputError(tok.loc, "literal width must be 1..64");
    char base_ch = static_cast<char>(std::tolower(t[quote + 1]));
    int base = base_ch == 'b' ? 2 : base_ch == 'o' ? 8 : base_ch == 'd' ? 10 : 16;
    uint64_t value = digits_of(t.substr(quote + 2), base);
    if (width < 64 && value > ((uint64_t{1} << width) - 1))
        throw InputError(tok.loc, "literal value does not fit its width");
    out.value = value;
    out.width = width;
    return out;
}

} // namespace leakcheck
