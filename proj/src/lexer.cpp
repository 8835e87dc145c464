#include "qualex/lexer.hpp"

#include "qualex/errors.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace qualex {

namespace {

const std::unordered_set<std::string_view>& keywords() {
    static const std::unordered_set<std::string_view> set = {
        // control and computation
        "if", "else", "for", "while", "do", "switch", "case", "default", "return", "break", "continue", "goto",
        "throw", "try", "catch", "finally", "new", "delete", "sizeof", "typeof", "instanceof", "yield", "await",
        "alignof", "decltype", "typeid", "static_cast", "dynamic_cast", "const_cast", "reinterpret_cast",
        "co_await", "co_yield", "co_return", "assert", "synchronized",
        // literal-like
        "true", "false", "null", "nullptr", "undefined", "this", "super",
        // declarations, types and modifiers
        "int", "char", "short", "long", "float", "double", "bool", "boolean", "byte", "void", "signed",
        "unsigned", "auto", "const", "volatile", "static", "extern", "register", "inline", "virtual", "explicit",
        "friend", "mutable", "constexpr", "consteval", "constinit", "typedef", "typename", "template", "class",
        "struct", "union", "enum", "namespace", "using", "public", "private", "protected", "operator", "final",
        "override", "noexcept", "abstract", "interface", "extends", "implements", "package", "import", "export",
        "function", "var", "let", "native", "transient", "strictfp", "throws", "async", "static_assert",
        "thread_local", "concept", "requires"};
    return set;
}

// Longest-match punctuation table, longest entries first.
constexpr std::string_view kPuncts[] = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->*", "<=>", "===", "!==", "**=", "&&=", "||=", "?\?=",
    "->",   "::",  "++",  "--",  "<<",  ">>",  "<=",  ">=",  "==",  "!=",  "&&",  "||",  "+=",
    "-=",   "*=",  "/=",  "%=",  "&=",  "|=",  "^=",  "=>",  "?.",  "??",  ".*",  "**",
    "+",    "-",   "*",   "/",   "%",   "=",   "<",   ">",   "!",   "~",   "&",   "|",   "^",
    "?",    ":",   ";",   ",",   ".",   "(",   ")"};

constexpr std::string_view kBrackets = "[]{}";

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' ||
           static_cast<unsigned char>(c) >= 0x80;
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src), code_line_(count_lines(src) + 2, false) {}

    LexedSource run() {
        bool line_start = true;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
                line_start = true;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                ++pos_;
                continue;
            }
            if (c == '/' && peek(1) == '/') {
                skip_line_comment();
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                skip_block_comment();
                continue;
            }
            if (c == '#' && line_start) {
                skip_directive();
                continue;
            }
            line_start = false;
            lex_token();
        }
        if (!bracket_stack_.empty())
            throw ParseFailure("unclosed '" + std::string(1, bracket_stack_.back().first) + "' opened on line " +
                               std::to_string(bracket_stack_.back().second));
        LexedSource out;
        out.tokens = std::move(tokens_);
        out.code_lines = static_cast<std::size_t>(std::count(code_line_.begin(), code_line_.end(), true));
        return out;
    }

private:
    static std::size_t count_lines(std::string_view s) {
        return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) + 1;
    }

    char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    void mark(int from, int to) {
        for (int l = from; l <= to; ++l) code_line_[static_cast<std::size_t>(l)] = true;
    }

    void push(TokenKind kind, std::string text, int start_line) {
        mark(start_line, line_);
        tokens_.push_back(Token{kind, std::move(text), start_line});
    }

    void skip_line_comment() {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    }

    void skip_block_comment() {
        int start = line_;
        pos_ += 2;
        while (pos_ < src_.size()) {
            if (src_[pos_] == '*' && peek(1) == '/') {
                pos_ += 2;
                return;
            }
            if (src_[pos_] == '\n') ++line_;
            ++pos_;
        }
        throw ParseFailure("unterminated block comment starting on line " + std::to_string(start));
    }

    // Preprocessor directives (and shebang lines) are code lines but carry no
    // Halstead tokens.
    void skip_directive() {
        int start = line_;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\\' && peek(1) == '\n') {
                pos_ += 2;
                ++line_;
                continue;
            }
            if (c == '\\' && peek(1) == '\r' && peek(2) == '\n') {
                pos_ += 3;
                ++line_;
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                mark(start, line_);
                skip_block_comment();
                start = line_;
                continue;
            }
            if (c == '/' && peek(1) == '/') break;
            if (c == '\n') break;
            ++pos_;
        }
        mark(start, line_);
        skip_line_comment();
    }

    bool regex_allowed() const {
        if (tokens_.empty()) return true;
        const Token& t = tokens_.back();
        switch (t.kind) {
        case TokenKind::Identifier:
        case TokenKind::Number:
        case TokenKind::String: return false;
        case TokenKind::Keyword:
            return !(t.text == "this" || t.text == "super" || t.text == "true" || t.text == "false" ||
                     t.text == "null" || t.text == "undefined" || t.text == "nullptr");
        case TokenKind::Punct: return !(t.text == ")" || t.text == "]" || t.text == "}" || t.text == "++" || t.text == "--");
        }
        return true;
    }

    void lex_token() {
        const int start_line = line_;
        const std::size_t start = pos_;
        char c = src_[pos_];

        if (is_ident_start(c)) {
            while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
            std::string word(src_.substr(start, pos_ - start));
            if (pos_ < src_.size() && src_[pos_] == '"' &&
                (word == "R" || word == "LR" || word == "uR" || word == "UR" || word == "u8R")) {
                lex_raw_string(start, start_line);
                return;
            }
            if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'') &&
                (word == "L" || word == "u" || word == "U" || word == "u8")) {
                lex_quoted(src_[pos_], start, start_line);
                return;
            }
            bool member = !tokens_.empty() && tokens_.back().kind == TokenKind::Punct &&
                          (tokens_.back().text == "." || tokens_.back().text == "->" || tokens_.back().text == "?.");
            TokenKind kind = (!member && keywords().count(word)) ? TokenKind::Keyword : TokenKind::Identifier;
            push(kind, std::move(word), start_line);
            return;
        }
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
            lex_number(start_line);
            return;
        }
        if (c == '"' && peek(1) == '"' && peek(2) == '"') {
            lex_text_block(start_line);
            return;
        }
        if (c == '"' || c == '\'') {
            lex_quoted(c, start, start_line);
            return;
        }
        if (c == '`') {
            lex_template(start_line);
            return;
        }
        if (c == '/' && regex_allowed()) {
            lex_regex(start_line);
            return;
        }
        if (kBrackets.find(c) != std::string_view::npos || c == '(' || c == ')') {
            bracket(c, start_line);
            ++pos_;
            push(TokenKind::Punct, std::string(1, c), start_line);
            return;
        }
        for (auto p : kPuncts) {
            if (src_.substr(pos_, p.size()) == p) {
                pos_ += p.size();
                push(TokenKind::Punct, std::string(p), start_line);
                return;
            }
        }
        // Stray characters (e.g. '@' annotations, '#' private fields, '\\').
        ++pos_;
        push(TokenKind::Punct, std::string(1, c), start_line);
    }

    void bracket(char c, int line) {
        auto closer_of = [](char open) { return open == '(' ? ')' : open == '[' ? ']' : '}'; };
        if (c == '(' || c == '[' || c == '{') {
            bracket_stack_.emplace_back(c, line);
            return;
        }
        if (bracket_stack_.empty() || closer_of(bracket_stack_.back().first) != c)
            throw ParseFailure("unbalanced '" + std::string(1, c) + "' on line " + std::to_string(line));
        bracket_stack_.pop_back();
    }

    bool is_exponent_mark(std::size_t start, char prev) const {
        const bool hex = src_[start] == '0' && start + 1 < src_.size() && (src_[start + 1] == 'x' || src_[start + 1] == 'X');
        return hex ? (prev == 'p' || prev == 'P') : (prev == 'e' || prev == 'E');
    }

    void lex_number(int start_line) {
        const std::size_t start = pos_;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (is_ident_char(c) || c == '.') {
                ++pos_;
            } else if ((c == '+' || c == '-') && pos_ > start && is_exponent_mark(start, src_[pos_ - 1])) {
                ++pos_;
            } else if (c == '\'' && pos_ > start && is_ident_char(peek(1))) {
                ++pos_; // digit separator
            } else {
                break;
            }
        }
        push(TokenKind::Number, std::string(src_.substr(start, pos_ - start)), start_line);
    }

    void lex_quoted(char quote, std::size_t start, int start_line) {
        ++pos_;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\\') {
                if (peek(1) == '\n') ++line_;
                pos_ += 2;
                continue;
            }
            if (c == '\n') break;
            ++pos_;
            if (c == quote) {
                push(TokenKind::String, std::string(src_.substr(start, pos_ - start)), start_line);
                return;
            }
        }
        throw ParseFailure("unterminated literal on line " + std::to_string(start_line));
    }

    void lex_raw_string(std::size_t start, int start_line) {
        ++pos_; // opening quote
        std::size_t paren = src_.find('(', pos_);
        if (paren == std::string_view::npos || paren - pos_ > 16)
            throw ParseFailure("malformed raw string on line " + std::to_string(start_line));
        std::string terminator = ")" + std::string(src_.substr(pos_, paren - pos_)) + "\"";
        std::size_t end = src_.find(terminator, paren);
        if (end == std::string_view::npos)
            throw ParseFailure("unterminated raw string on line " + std::to_string(start_line));
        end += terminator.size();
        line_ += static_cast<int>(std::count(src_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                             src_.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
        pos_ = end;
        push(TokenKind::String, std::string(src_.substr(start, pos_ - start)), start_line);
    }

    void lex_text_block(int start_line) {
        const std::size_t start = pos_;
        std::size_t end = src_.find("\"\"\"", pos_ + 3);
        while (end != std::string_view::npos && src_[end - 1] == '\\') end = src_.find("\"\"\"", end + 1);
        if (end == std::string_view::npos)
            throw ParseFailure("unterminated text block on line " + std::to_string(start_line));
        end += 3;
        line_ += static_cast<int>(std::count(src_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                             src_.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
        pos_ = end;
        push(TokenKind::String, std::string(src_.substr(start, pos_ - start)), start_line);
    }

    // Template literals are one operand; `${...}` substitutions are skipped
    // with brace matching so that nested braces and strings do not end it early.
    void lex_template(int start_line) {
        const std::size_t start = pos_;
        ++pos_;
        int depth = 0;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\\') {
                if (peek(1) == '\n') ++line_;
                pos_ += 2;
                continue;
            }
            if (c == '\n') ++line_;
            if (depth == 0 && c == '`') {
                ++pos_;
                push(TokenKind::String, std::string(src_.substr(start, pos_ - start)), start_line);
                return;
            }
            if (c == '$' && peek(1) == '{') {
                ++depth;
                pos_ += 2;
                continue;
            }
            if (depth > 0 && c == '{') ++depth;
            if (depth > 0 && c == '}') --depth;
            ++pos_;
        }
        throw ParseFailure("unterminated template literal on line " + std::to_string(start_line));
    }

    void lex_regex(int start_line) {
        const std::size_t start = pos_;
        ++pos_;
        bool in_class = false;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') break;
            if (c == '\\') {
                pos_ += 2;
                continue;
            }
            if (c == '[') in_class = true;
            if (c == ']') in_class = false;
            ++pos_;
            if (c == '/' && !in_class) {
                while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_; // flags
                push(TokenKind::String, std::string(src_.substr(start, pos_ - start)), start_line);
                return;
            }
        }
        // Not a regex after all: treat as a division operator.
        pos_ = start;
        if (peek(1) == '=') {
            pos_ += 2;
            push(TokenKind::Punct, "/=", start_line);
        } else {
            ++pos_;
            push(TokenKind::Punct, "/", start_line);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::vector<bool> code_line_;
    std::vector<Token> tokens_;
    std::vector<std::pair<char, int>> bracket_stack_;
};

} // namespace

LexedSource lex_c_family(std::string_view source) { return Lexer(source).run(); }

bool is_c_family_keyword(std::string_view word) { return keywords().count(word) != 0; }

} // namespace qualex
