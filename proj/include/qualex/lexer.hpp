#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qualex {

enum class TokenKind {
    Identifier,
    Keyword,
    Number,
    String, // string, char, template and regex literals
    Punct,
};

struct Token {
    TokenKind kind;
    std::string text;
    int line; // 1-based line of the first character

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool punct(std::string_view t) const { return kind == TokenKind::Punct && text == t; }
    bool keyword(std::string_view t) const { return kind == TokenKind::Keyword && text == t; }
};

struct LexedSource {
    std::vector<Token> tokens;
    /// Lines holding code (tokens or preprocessor text), excluding blank and
    /// comment-only lines.
    std::size_t code_lines = 0;
};

/// Tokenizes brace-block source: C, C++, Java, JavaScript/TypeScript, C#.
/// Comments and preprocessor directives produce no tokens. Keywords that
/// follow a member access (`.`, `->`, `?.`) are demoted to identifiers.
/// Throws ParseFailure on unterminated comments/literals or unbalanced
/// brackets.
LexedSource lex_c_family(std::string_view source);

bool is_c_family_keyword(std::string_view word);

} // namespace qualex
