#include "patchq/frontend.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>

namespace patchq {

Const decode_based(std::string_view text, SourcePos pos);
Const decode_decimal(std::string_view text, SourcePos pos);

namespace {

constexpr std::array kKeywords = {
    "module",     "endmodule",    "input",     "output",      "inout",     "wire",
    "reg",        "logic",        "integer",   "assign",      "always",    "always_ff",
    "always_comb", "always_latch", "posedge",  "negedge",     "or",        "begin",
    "end",        "if",           "else",      "case",        "casez",     "casex",
    "endcase",    "default",      "for",       "function",    "endfunction", "task",
    "endtask",    "generate",     "endgenerate", "genvar",    "interface", "endinterface",
    "parameter",  "localparam",   "initial",   "signed",      "unsigned",  "while",
    "repeat",     "forever",      "int",       "bit",         "byte",      "typedef",
    "struct",     "enum",         "package",   "endpackage",  "import",    "unique",
    "priority",
};

// Longest first within each leading character.
constexpr std::array kOperators = {
    "===", "!==", "<<<", ">>>", "~^", "^~", "~&", "~|", "&&", "||", "==", "!=", "<=", ">=",
    "<<",  ">>",  "++",  "--",  "+=", "-=", "->", "::", "+",  "-",  "*",  "/",  "%",  "!",
    "~",   "&",   "|",   "^",   "<",  ">",  "=",  "?",  ":",
};

constexpr std::string_view kPunctuation = "()[]{};,@#.";

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            if (at_end())
                break;
            out.push_back(next());
        }
        out.push_back(Token{TokenKind::End, "", here()});
        return out;
    }

private:
    std::string_view src_;
    std::size_t i_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;

    bool at_end() const { return i_ >= src_.size(); }
    char peek(std::size_t k = 0) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }
    SourcePos here() const { return {line_, col_}; }

    void advance() {
        if (src_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void skip_space_and_comments() {
        while (!at_end()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else if (c == '/' && peek(1) == '*') {
                SourcePos start = here();
                advance();
                advance();
                while (!at_end() && !(peek() == '*' && peek(1) == '/'))
                    advance();
                if (at_end())
                    throw LexError("unterminated block comment", start);
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    Token next() {
        const SourcePos pos = here();
        const char c = peek();
        if (c == '`')
            throw UnsupportedConstruct("preprocessor directives are not supported", pos);
        if (c == '\\')
            throw UnsupportedConstruct("escaped identifiers are not supported", pos);
        if (ident_start(c)) {
            std::size_t start = i_;
            while (!at_end() && ident_char(peek()))
                advance();
            std::string word(src_.substr(start, i_ - start));
            TokenKind kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
            return Token{kind, std::move(word), pos};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'')
            return number(pos);
        if (kPunctuation.find(c) != std::string_view::npos) {
            advance();
            return Token{TokenKind::Punctuation, std::string(1, c), pos};
        }
        for (std::string_view op : kOperators) {
            if (src_.substr(i_, op.size()) == op) {
                for (std::size_t k = 0; k < op.size(); ++k)
                    advance();
                return Token{TokenKind::Operator, std::string(op), pos};
            }
        }
        throw LexError(std::string("unrecognized character '") + c + "'", pos);
    }

    // [size] ' [s] base digits  |  decimal digits
    Token number(SourcePos pos) {
        std::size_t start = i_;
        while (std::isdigit(static_cast<unsigned char>(peek())) || (i_ > start && peek() == '_'))
            advance();
        if (peek() != '\'')
            return Token{TokenKind::IntegerLiteral, std::string(src_.substr(start, i_ - start)), pos};
        advance(); // '
        if (peek() == 's' || peek() == 'S')
            advance();
        const char base = static_cast<char>(std::tolower(static_cast<unsigned char>(peek())));
        if (base != 'b' && base != 'h' && base != 'd' && base != 'o')
            throw LexError("malformed based literal: expected base b, o, d or h after '", pos);
        advance();
        std::size_t digits = 0;
        while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == 'x' ||
               peek() == 'X' || peek() == 'z' || peek() == 'Z' || peek() == '?') {
            if (peek() != '_')
                ++digits;
            advance();
        }
        if (digits == 0)
            throw LexError("malformed based literal: missing digits", pos);
        std::string text(src_.substr(start, i_ - start));
        decode_based(text, pos); // validate
        return Token{TokenKind::BasedLiteral, std::move(text), pos};
    }
};

} // namespace

bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

Const decode_based(std::string_view text, SourcePos pos) {
    Const c;
    c.based = true;
    const auto tick = text.find('\'');
    std::string_view size_part = text.substr(0, tick);
    std::size_t k = tick + 1;
    if (text[k] == 's' || text[k] == 'S')
        ++k;
    c.base = static_cast<char>(std::tolower(static_cast<unsigned char>(text[k])));
    ++k;
    const unsigned radix = c.base == 'b' ? 2 : c.base == 'o' ? 8 : c.base == 'h' ? 16 : 10;

    if (!size_part.empty()) {
        std::uint64_t width = 0;
        for (char ch : size_part) {
            if (ch == '_')
                continue;
            width = width * 10 + static_cast<unsigned>(ch - '0');
            if (width > std::numeric_limits<std::uint32_t>::max())
                throw LexError("literal width too large", pos);
        }
        if (width == 0)
            throw LexError("literal width must be positive", pos);
        c.width = static_cast<std::uint32_t>(width);
        c.sized = true;
    }

    std::uint64_t value = 0;
    for (; k < text.size(); ++k) {
        const char ch = text[k];
        if (ch == '_')
            continue;
        if (ch == 'x' || ch == 'X' || ch == 'z' || ch == 'Z' || ch == '?')
            throw LexError("x/z digits are not supported in literals", pos);
        const unsigned digit = std::isdigit(static_cast<unsigned char>(ch))
                                   ? static_cast<unsigned>(ch - '0')
                                   : static_cast<unsigned>(std::tolower(static_cast<unsigned char>(ch)) - 'a' + 10);
        if (digit >= radix)
            throw LexError(std::string("digit '") + ch + "' is invalid for base '" + c.base + "'", pos);
        if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / radix)
            throw LexError("literal value exceeds 64 bits", pos);
        value = value * radix + digit;
    }
    if (c.width < 64 && (value >> c.width) != 0)
        throw LexError("literal value does not fit in " + std::to_string(c.width) + " bits", pos);
    c.value = value;
    return c;
}

Const decode_decimal(std::string_view text, SourcePos pos) {
    Const c;
    std::uint64_t value = 0;
    for (char ch : text) {
        if (ch == '_')
            continue;
        const unsigned digit = static_cast<unsigned>(ch - '0');
        if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10)
            throw LexError("literal value exceeds 64 bits", pos);
        value = value * 10 + digit;
    }
    c.value = value;
    return c;
}

Const decode_literal(const Token& tok) {
    if (tok.kind == TokenKind::BasedLiteral)
        return decode_based(tok.text, tok.pos);
    return decode_decimal(tok.text, tok.pos);
}

std::vector<Token> tokenize(std::string_view source) {
    return Lexer(source).run();
}

} // namespace patchq
