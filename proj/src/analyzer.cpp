#include "qualex/analyzer.hpp"

#include "qualex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace qualex {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

const std::unordered_set<std::string_view>& operator_keywords() {
    static const std::unordered_set<std::string_view> set = {
        "if",       "else",         "for",          "while",      "do",         "switch",      "case",
        "default",  "return",       "break",        "continue",   "goto",       "throw",       "try",
        "catch",    "finally",      "new",          "delete",     "sizeof",     "typeof",      "instanceof",
        "yield",    "await",        "alignof",      "decltype",   "typeid",     "static_cast", "dynamic_cast",
        "const_cast", "reinterpret_cast", "co_await", "co_yield", "co_return", "assert", "synchronized"};
    return set;
}

const std::unordered_set<std::string_view>& literal_keywords() {
    static const std::unordered_set<std::string_view> set = {"true",      "false", "null", "nullptr",
                                                              "undefined", "this",  "super"};
    return set;
}

bool is_control_keyword(const Token& t) {
    return t.kind == TokenKind::Keyword &&
           (t.text == "if" || t.text == "for" || t.text == "while" || t.text == "switch" || t.text == "catch" ||
            t.text == "synchronized" || t.text == "using");
}

// Tokens allowed between a parameter list and the body's '{'.
bool is_signature_trailer(const Token& t) {
    switch (t.kind) {
    case TokenKind::Identifier:
    case TokenKind::Number: return true;
    case TokenKind::Keyword:
        return t.text == "const" || t.text == "override" || t.text == "final" || t.text == "noexcept" ||
               t.text == "mutable" || t.text == "volatile" || t.text == "throws" || t.text == "requires" ||
               t.text == "async" || t.text == "constexpr" || t.text == "consteval" || t.text == "int" ||
               t.text == "char" || t.text == "short" || t.text == "long" || t.text == "float" ||
               t.text == "double" || t.text == "bool" || t.text == "boolean" || t.text == "void" ||
               t.text == "unsigned" || t.text == "signed" || t.text == "auto" || t.text == "decltype";
    case TokenKind::Punct:
        return t.text == "::" || t.text == "," || t.text == ":" || t.text == "->" || t.text == "<" ||
               t.text == ">" || t.text == ">>" || t.text == "*" || t.text == "&" || t.text == "&&" ||
               t.text == "." || t.text == "...";
    case TokenKind::String: return false;
    }
    return false;
}

bool is_open(const Token& t) {
    return t.kind == TokenKind::Punct && (t.text == "(" || t.text == "[" || t.text == "{");
}

class CfgBuilder {
public:
    CfgBuilder(std::span<const Token> tokens, std::span<const std::size_t> match)
        : tokens_(tokens), match_(match) {}

    ControlFlowSummary build(const FunctionSpan& fn) {
        const int entry = add_node();
        exit_ = add_node();
        const int end = block_body(fn.open + 1, fn.close, entry);
        if (end >= 0) add_edge(end, exit_);
        ControlFlowSummary s;
        s.nodes = nodes_;
        s.edges = edges_;
        s.exits = 1;
        for (std::size_t i = fn.open + 1; i < fn.close; ++i)
            if (is_decision_point(tokens_, i)) ++s.decision_points;
        return s;
    }

private:
    struct Jumps {
        int break_to;
        int continue_to;
    };

    int add_node() { return static_cast<int>(nodes_++); }
    void add_edge(int from, int to) {
        (void)from;
        (void)to;
        ++edges_;
    }
    int fresh(int from) {
        const int n = add_node();
        if (from >= 0) add_edge(from, n);
        return n;
    }

    // Each short-circuit or conditional operator becomes a diamond: the
    // current node branches to an arm node and a join node.
    int chain_decisions(int cur, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            if (!is_decision_point(tokens_, i)) continue;
            const int arm = fresh(cur);
            const int join = add_node();
            add_edge(arm, join);
            if (cur >= 0) add_edge(cur, join);
            cur = join;
        }
        return cur;
    }

    bool punct_at(std::size_t i, std::size_t end, std::string_view p) const {
        return i < end && tokens_[i].punct(p);
    }
    bool keyword_at(std::size_t i, std::size_t end, std::string_view k) const {
        return i < end && tokens_[i].keyword(k);
    }

    // Skips to one past the `;` ending a simple statement, or to `end`.
    std::size_t statement_end(std::size_t i, std::size_t end) const {
        while (i < end) {
            if (is_open(tokens_[i])) {
                i = match_[i] + 1;
                continue;
            }
            if (tokens_[i].punct(";")) return i + 1;
            ++i;
        }
        return end;
    }

    int block_body(std::size_t i, std::size_t end, int cur) {
        while (i < end) std::tie(i, cur) = statement(i, end, cur);
        return cur;
    }

    std::pair<std::size_t, int> simple(std::size_t i, std::size_t end, int from) {
        const std::size_t stop = statement_end(i, end);
        const int node = chain_decisions(fresh(from), i, stop);
        return {stop, node};
    }

    std::pair<std::size_t, int> statement(std::size_t i, std::size_t end, int from) {
        const Token& t = tokens_[i];
        if (t.punct("{")) {
            const std::size_t close = match_[i];
            return {close + 1, block_body(i + 1, close, from)};
        }
        if (t.punct(";")) return {i + 1, from};
        if (t.kind == TokenKind::Identifier && punct_at(i + 1, end, ":")) return statement_after_label(i + 2, end, from);
        if (t.kind != TokenKind::Keyword) return simple(i, end, from);

        if (t.text == "if") return if_statement(i, end, from);
        if (t.text == "for") return loop_statement(i, end, from, true);
        if (t.text == "while") return loop_statement(i, end, from, false);
        if (t.text == "do") return do_statement(i, end, from);
        if (t.text == "switch") return switch_statement(i, end, from);
        if (t.text == "try") return try_statement(i, end, from);
        if (t.text == "return" || t.text == "throw" || t.text == "co_return") {
            auto [next, node] = simple(i, end, from);
            add_edge(node, exit_);
            return {next, -1};
        }
        if ((t.text == "break" || t.text == "continue") && !jumps_.empty()) {
            const std::size_t next = statement_end(i, end);
            const int node = chain_decisions(fresh(from), i + 1, next);
            add_edge(node, t.text == "break" ? jumps_.back().break_to : jumps_.back().continue_to);
            return {next, -1};
        }
        return simple(i, end, from);
    }

    std::pair<std::size_t, int> statement_after_label(std::size_t i, std::size_t end, int from) {
        if (i >= end) return {end, from};
        return statement(i, end, from);
    }

    // Parses "( ... )" at i, returning the index after ')' or npos.
    std::size_t paren_group(std::size_t i, std::size_t end) const {
        if (!punct_at(i, end, "(")) return npos;
        return match_[i] + 1;
    }

    std::pair<std::size_t, int> if_statement(std::size_t i, std::size_t end, int from) {
        std::size_t p = i + 1;
        if (keyword_at(p, end, "constexpr")) ++p;
        const std::size_t after_cond = paren_group(p, end);
        if (after_cond == npos || after_cond >= end) return simple(i, end, from);
        // The `if` token itself is the branch; its condition may add diamonds.
        const int cond = chain_decisions(fresh(from), p, after_cond);
        auto [next, then_end] = statement(after_cond, end, cond);
        int else_end = cond;
        if (keyword_at(next, end, "else") && next + 1 < end) {
            std::tie(next, else_end) = statement(next + 1, end, cond);
        }
        if (then_end < 0 && else_end < 0) return {next, -1};
        const int join = add_node();
        if (then_end >= 0) add_edge(then_end, join);
        if (else_end >= 0) add_edge(else_end, join);
        return {next, join};
    }

    std::pair<std::size_t, int> loop_statement(std::size_t i, std::size_t end, int from, bool is_for) {
        const std::size_t after_head = paren_group(i + 1, end);
        if (after_head == npos || after_head > end) return simple(i, end, from);
        const int head = chain_decisions(fresh(from), i + 2, after_head - 1);
        const int cond = fresh(head);
        const int after = add_node();
        const int step = is_for ? add_node() : cond;
        jumps_.push_back({after, step});
        std::size_t next = after_head;
        int body_end = cond;
        if (after_head < end) std::tie(next, body_end) = statement(after_head, end, cond);
        jumps_.pop_back();
        if (body_end >= 0) add_edge(body_end, step);
        if (is_for) add_edge(step, cond);
        add_edge(cond, after);
        return {next, after};
    }

    std::pair<std::size_t, int> do_statement(std::size_t i, std::size_t end, int from) {
        if (i + 1 >= end) return simple(i, end, from);
        const int start = fresh(from);
        const int cond_start = add_node();
        const int after = add_node();
        jumps_.push_back({after, cond_start});
        auto [next, body_end] = statement(i + 1, end, start);
        jumps_.pop_back();
        if (body_end >= 0) add_edge(body_end, cond_start);
        if (!keyword_at(next, end, "while")) {
            // Malformed tail: treat the remainder as plain code after the body.
            add_edge(cond_start, after);
            return {next, after};
        }
        const std::size_t after_cond = paren_group(next + 1, end);
        if (after_cond == npos) {
            add_edge(cond_start, after);
            return simple(next, end, after);
        }
        const int cond = fresh(chain_decisions(cond_start, next + 2, after_cond - 1));
        add_edge(cond, start);
        add_edge(cond, after);
        std::size_t resume = after_cond;
        if (punct_at(resume, end, ";")) ++resume;
        return {resume, after};
    }

    std::pair<std::size_t, int> switch_statement(std::size_t i, std::size_t end, int from) {
        const std::size_t after_head = paren_group(i + 1, end);
        if (after_head == npos || !punct_at(after_head, end, "{")) return simple(i, end, from);
        const int selector = chain_decisions(fresh(from), i + 2, after_head - 1);
        const std::size_t close = match_[after_head];
        const int after = add_node();
        jumps_.push_back({after, jumps_.empty() ? exit_ : jumps_.back().continue_to});

        bool has_default = false;
        int cur = -1;
        std::size_t k = after_head + 1;
        while (k < close) {
            const Token& t = tokens_[k];
            const bool is_case = t.keyword("case");
            const bool is_default =
                t.keyword("default") && (punct_at(k + 1, close, ":") || punct_at(k + 1, close, "->"));
            if (!is_case && !is_default) {
                std::tie(k, cur) = statement(k, close, cur);
                continue;
            }
            std::size_t label_end = k + 1;
            while (label_end < close && !tokens_[label_end].punct(":") && !tokens_[label_end].punct("->")) {
                label_end = is_open(tokens_[label_end]) ? match_[label_end] + 1 : label_end + 1;
            }
            const int label = add_node();
            add_edge(selector, label);
            if (cur >= 0) add_edge(cur, label);
            cur = chain_decisions(label, k + 1, label_end);
            if (is_default) has_default = true;
            if (label_end >= close) {
                k = close;
                break;
            }
            const bool arrow = tokens_[label_end].punct("->");
            k = label_end + 1;
            if (arrow && k < close) {
                int arm_end = -1;
                std::tie(k, arm_end) = statement(k, close, cur);
                if (arm_end >= 0) add_edge(arm_end, after);
                cur = -1;
            }
        }
        jumps_.pop_back();
        if (cur >= 0) add_edge(cur, after);
        if (!has_default) add_edge(selector, after);
        return {close + 1, after};
    }

    std::pair<std::size_t, int> try_statement(std::size_t i, std::size_t end, int from) {
        std::size_t p = i + 1;
        const bool has_resources = punct_at(p, end, "("); // try-with-resources
        if (has_resources) p = match_[p] + 1;
        if (!punct_at(p, end, "{")) return simple(i, end, from);
        int entry = fresh(from);
        if (has_resources) entry = chain_decisions(entry, i + 2, p - 1);
        std::vector<int> ends;
        auto [next, body_end] = statement(p, end, entry);
        ends.push_back(body_end);
        while (keyword_at(next, end, "catch")) {
            std::size_t q = next + 1;
            const int handler = add_node();
            add_edge(entry, handler);
            int handler_start = handler;
            if (punct_at(q, end, "(")) {
                handler_start = chain_decisions(handler, q + 1, match_[q]);
                q = match_[q] + 1;
            }
            if (!punct_at(q, end, "{")) {
                next = q;
                ends.push_back(handler_start);
                break;
            }
            int handler_end = -1;
            std::tie(next, handler_end) = statement(q, end, handler_start);
            ends.push_back(handler_end);
        }
        int join = -1;
        if (std::any_of(ends.begin(), ends.end(), [](int e) { return e >= 0; })) {
            join = add_node();
            for (int e : ends)
                if (e >= 0) add_edge(e, join);
        }
        if (keyword_at(next, end, "finally") && next + 1 < end) return statement(next + 1, end, join);
        return {next, join};
    }

    std::span<const Token> tokens_;
    std::span<const std::size_t> match_;
    std::size_t nodes_ = 0;
    std::size_t edges_ = 0;
    int exit_ = -1;
    std::vector<Jumps> jumps_;
};

class CFamilyProfile : public LanguageProfile {
public:
    CFamilyProfile(std::string id, std::vector<std::string> extensions, bool coupling)
        : id_(std::move(id)), extensions_(std::move(extensions)), coupling_(coupling) {}

    std::string_view id() const override { return id_; }
    bool supports_coupling() const override { return coupling_; }

    bool accepts_path(std::string_view path) const override {
        const auto slash = path.rfind('/');
        const auto name = slash == std::string_view::npos ? path : path.substr(slash + 1);
        const auto dot = name.rfind('.');
        if (dot == std::string_view::npos || dot == 0) return false;
        std::string ext(name.substr(dot));
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        return std::find(extensions_.begin(), extensions_.end(), ext) != extensions_.end();
    }

    SourceAnalysis analyze(std::string_view text) const override {
        if (text.size() > kMaxAnalyzableBytes) throw ParseFailure("file exceeds 1 MiB");
        if (text.find('\0') != std::string_view::npos) throw ParseFailure("binary content");

        LexedSource lexed = lex_c_family(text);
        const std::vector<Token>& tokens = lexed.tokens;
        const auto match = match_brackets(tokens);

        SourceAnalysis out;
        out.halstead = count_halstead(tokens);
        int max_cc = 0;
        for (const FunctionSpan& span : find_functions(tokens, match)) {
            FunctionMetrics fm;
            fm.name = span.name;
            fm.line = span.line;
            fm.cfg = summarize_control_flow(tokens, match, span);
            fm.cc = static_cast<int>(fm.cfg.decision_points) + 1;
            max_cc = std::max(max_cc, fm.cc);
            out.functions.push_back(std::move(fm));
        }
        out.metrics.cc = max_cc;
        out.metrics.hv = out.halstead.volume();
        out.metrics.hd = out.halstead.difficulty();
        out.metrics.sloc = static_cast<double>(lexed.code_lines);
        if (coupling_) out.imports = extract_imports(tokens);
        return out;
    }

private:
    std::string id_;
    std::vector<std::string> extensions_;
    bool coupling_;
};

const std::vector<const LanguageProfile*>& profiles() {
    static const CFamilyProfile c_family(
        "c-family",
        {".c", ".h", ".cc", ".cpp", ".cxx", ".hpp", ".hh", ".hxx", ".ipp", ".inl", ".java", ".js", ".mjs", ".cjs",
         ".jsx", ".ts", ".tsx", ".cs"},
        false);
    static const CFamilyProfile java_like("java-like", {".java"}, true);
    static const std::vector<const LanguageProfile*> all{&c_family, &java_like};
    return all;
}

} // namespace

double HalsteadCounts::volume() const {
    const double vocabulary = static_cast<double>(distinct_operators + distinct_operands);
    if (vocabulary <= 0.0) return 0.0;
    return static_cast<double>(total_operators + total_operands) * std::log2(vocabulary);
}

double HalsteadCounts::difficulty() const {
    if (distinct_operands == 0) return 0.0;
    return (static_cast<double>(distinct_operators) / 2.0) *
           (static_cast<double>(total_operands) / static_cast<double>(distinct_operands));
}

const LanguageProfile& find_profile(std::string_view id) {
    for (const LanguageProfile* p : profiles())
        if (p->id() == id) return *p;
    throw UnknownProfile("unknown language profile '" + std::string(id) + "'");
}

std::vector<std::string> registered_profiles() {
    std::vector<std::string> ids;
    for (const LanguageProfile* p : profiles()) ids.emplace_back(p->id());
    return ids;
}

SourceAnalysis analyze_source_detailed(std::string_view text, std::string_view profile_id) {
    return find_profile(profile_id).analyze(text);
}

MetricVector analyze_source(std::string_view text, std::string_view profile_id) {
    return analyze_source_detailed(text, profile_id).metrics;
}

HalsteadCounts count_halstead(std::span<const Token> tokens) {
    std::set<std::string> operators;
    std::set<std::string> operands;
    HalsteadCounts counts;
    auto op = [&](std::string key) {
        ++counts.total_operators;
        operators.insert(std::move(key));
    };
    auto operand = [&](std::string key) {
        ++counts.total_operands;
        operands.insert(std::move(key));
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        switch (t.kind) {
        case TokenKind::Punct:
            if (t.text == ")" || t.text == "]" || t.text == "}") break;
            if (t.text == "(") op("()");
            else if (t.text == "[") op("[]");
            else if (t.text == "{") op("{}");
            else op(t.text);
            break;
        case TokenKind::Keyword:
            if (operator_keywords().count(t.text)) op(t.text);
            else if (literal_keywords().count(t.text)) operand(t.text);
            break;
        case TokenKind::Identifier:
            if (i + 1 < tokens.size() && tokens[i + 1].punct("(")) op(t.text + "()");
            else operand(t.text);
            break;
        case TokenKind::Number:
        case TokenKind::String: operand(t.text); break;
        }
    }
    counts.distinct_operators = operators.size();
    counts.distinct_operands = operands.size();
    return counts;
}

bool is_decision_point(std::span<const Token> tokens, std::size_t i) {
    const Token& t = tokens[i];
    if (t.kind == TokenKind::Keyword)
        return t.text == "if" || t.text == "for" || t.text == "while" || t.text == "case" || t.text == "catch";
    if (t.kind != TokenKind::Punct) return false;
    if (t.text == "&&" || t.text == "||") return true;
    if (t.text != "?") return false;
    // Java generic wildcards: `<?>`, `<? extends T>`, `Map<K, ?>`.
    if (i > 0 && tokens[i - 1].punct("<")) return false;
    if (i + 1 < tokens.size()) {
        const Token& next = tokens[i + 1];
        if (next.keyword("extends") || next.keyword("super") || next.punct(">") || next.punct(",") ||
            next.punct(">>"))
            return false;
    }
    return true;
}

std::vector<std::size_t> match_brackets(std::span<const Token> tokens) {
    std::vector<std::size_t> match(tokens.size(), npos);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (t.kind != TokenKind::Punct) continue;
        if (t.text == "(" || t.text == "[" || t.text == "{") {
            stack.push_back(i);
        } else if ((t.text == ")" || t.text == "]" || t.text == "}") && !stack.empty()) {
            match[i] = stack.back();
            match[stack.back()] = i;
            stack.pop_back();
        }
    }
    return match;
}

namespace {

// Decides whether the '{' at index `brace` opens a function body, and names it.
bool function_body_at(std::span<const Token> tokens, std::span<const std::size_t> match, std::size_t brace,
                      std::string& name) {
    if (brace == 0) return false;
    std::size_t j = brace - 1;
    if (tokens[j].punct("=>")) {
        name = "<arrow>";
        // `name = (params) =>` and `name = param =>`
        if (j == 0) return true;
        std::size_t k = j - 1;
        if (tokens[k].punct(")")) {
            if (match[k] == npos || match[k] == 0) return true;
            k = match[k] - 1;
        } else if (tokens[k].kind == TokenKind::Identifier && k > 0) {
            --k;
        } else {
            return true;
        }
        if (tokens[k].keyword("async") && k > 0) --k;
        if ((tokens[k].punct("=") || tokens[k].punct(":")) && k > 0 && tokens[k - 1].kind == TokenKind::Identifier)
            name = tokens[k - 1].text;
        return true;
    }
    while (true) {
        const Token& t = tokens[j];
        if (t.punct(")")) {
            const std::size_t open = match[j];
            if (open == npos || open == 0) return false;
            const std::size_t k = open - 1;
            const Token& before = tokens[k];
            if (is_control_keyword(before)) return false;
            if (before.keyword("constexpr") && k > 0 && tokens[k - 1].keyword("if")) return false;
            if (before.kind == TokenKind::Identifier) {
                name = before.text;
                if (k >= 2 && tokens[k - 1].punct("::") && tokens[k - 2].kind == TokenKind::Identifier)
                    name = tokens[k - 2].text + "::" + name;
                return true;
            }
            if (before.keyword("function")) {
                name = "<anonymous>";
                return true;
            }
            if (before.punct("]")) {
                name = "<lambda>";
                return true;
            }
            if (before.punct(">")) {
                name = "<template>";
                return true;
            }
            if (k > 0 && tokens[k - 1].keyword("operator")) {
                name = "operator" + before.text;
                return true;
            }
            if (before.punct(")") && match[k] != npos && match[k] > 0 && tokens[match[k] - 1].keyword("operator")) {
                name = "operator()";
                return true;
            }
            if (before.kind == TokenKind::Keyword && is_signature_trailer(before)) {
                // e.g. noexcept(...) or decltype(...) before the real signature
                if (k == 0) return false;
                j = k - 1;
                continue;
            }
            return false;
        }
        if (t.punct("]")) {
            const std::size_t open = match[j];
            if (open == npos || open == 0) return false;
            j = open - 1;
            continue;
        }
        if (!is_signature_trailer(t) || j == 0) return false;
        --j;
    }
}

} // namespace

std::vector<FunctionSpan> find_functions(std::span<const Token> tokens, std::span<const std::size_t> match) {
    std::vector<FunctionSpan> spans;
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (tokens[i].punct("{") && match[i] != npos) {
            std::string name;
            if (function_body_at(tokens, match, i, name)) {
                spans.push_back(FunctionSpan{std::move(name), tokens[i].line, i, match[i]});
                i = match[i] + 1;
                continue;
            }
        }
        ++i;
    }
    return spans;
}

ControlFlowSummary summarize_control_flow(std::span<const Token> tokens, std::span<const std::size_t> match,
                                          const FunctionSpan& fn) {
    return CfgBuilder(tokens, match).build(fn);
}

std::vector<std::string> extract_imports(std::span<const Token> tokens) {
    std::vector<std::string> imports;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!tokens[i].keyword("import")) continue;
        if (i > 0 && !tokens[i - 1].punct(";") && !tokens[i - 1].punct("}")) continue;
        std::size_t k = i + 1;
        if (k < tokens.size() && tokens[k].keyword("static")) ++k;
        std::string name;
        bool ok = false;
        while (k < tokens.size()) {
            const Token& t = tokens[k];
            if (t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword || t.punct(".") || t.punct("*") ||
                t.punct(".*")) {
                name += t.text;
                ++k;
                continue;
            }
            ok = t.punct(";");
            break;
        }
        if (ok && !name.empty()) imports.push_back(std::move(name));
    }
    return imports;
}

std::map<std::string, Coupling> resolve_coupling(const std::map<std::string, std::vector<std::string>>& imports) {
    struct Entry {
        std::string path;
        std::string stem; // path without extension
        std::string dir;
    };
    std::vector<Entry> files;
    for (const auto& [path, _] : imports) {
        Entry e{path, path, ""};
        const auto slash = path.rfind('/');
        const auto dot = path.rfind('.');
        if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) e.stem = path.substr(0, dot);
        e.dir = slash == std::string::npos ? "" : path.substr(0, slash);
        files.push_back(std::move(e));
    }
    auto ends_with_segments = [](const std::string& s, const std::string& suffix) {
        if (suffix.empty()) return s.empty();
        if (s.size() < suffix.size() || s.compare(s.size() - suffix.size(), suffix.size(), suffix) != 0)
            return false;
        return s.size() == suffix.size() || s[s.size() - suffix.size() - 1] == '/';
    };
    auto dotted_to_path = [](std::string dotted) {
        std::replace(dotted.begin(), dotted.end(), '.', '/');
        return dotted;
    };

    std::map<std::string, std::set<std::string>> targets;
    for (const auto& [path, list] : imports) {
        auto& out = targets[path];
        for (const std::string& imp : list) {
            std::vector<std::string> hits;
            if (imp.size() > 2 && imp.compare(imp.size() - 2, 2, ".*") == 0) {
                const std::string pkg = dotted_to_path(imp.substr(0, imp.size() - 2));
                for (const Entry& e : files)
                    if (ends_with_segments(e.dir, pkg)) hits.push_back(e.path);
            } else {
                std::string name = dotted_to_path(imp);
                for (int attempt = 0; attempt < 2 && hits.empty(); ++attempt) {
                    for (const Entry& e : files)
                        if (ends_with_segments(e.stem, name)) hits.push_back(e.path);
                    // static member imports: drop the trailing member name
                    const auto slash = name.rfind('/');
                    if (slash == std::string::npos) break;
                    name = name.substr(0, slash);
                }
            }
            for (auto& h : hits)
                if (h != path) out.insert(std::move(h));
        }
    }

    std::map<std::string, Coupling> result;
    for (const auto& [path, _] : imports) result[path] = Coupling{};
    for (const auto& [path, outs] : targets) {
        result[path].ce = static_cast<int>(outs.size());
        for (const auto& target : outs) ++result[target].ca;
    }
    return result;
}

std::map<std::string, Coupling> analyze_coupling(const std::map<std::string, std::string>& files,
                                                 std::string_view profile_id) {
    const LanguageProfile& profile = find_profile(profile_id);
    if (!profile.supports_coupling())
        throw ProfileLacksCoupling("profile '" + std::string(profile_id) + "' has no import analysis");
    std::map<std::string, std::vector<std::string>> imports;
    for (const auto& [path, text] : files) imports[path] = profile.analyze(text).imports;
    return resolve_coupling(imports);
}

} // namespace qualex
