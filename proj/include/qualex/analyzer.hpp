#pragma once

#include "qualex/lexer.hpp"
#include "qualex/metrics.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qualex {

/// Version tag of the built-in analyzer; participates in store cache keys.
inline constexpr std::string_view kAnalyzerVersion = "qualex-analyzer/1";

/// Files above this size are not analyzed.
inline constexpr std::size_t kMaxAnalyzableBytes = 1u << 20;

struct HalsteadCounts {
    std::size_t distinct_operators = 0; // eta1
    std::size_t total_operators = 0;    // N1
    std::size_t distinct_operands = 0;  // eta2
    std::size_t total_operands = 0;     // N2

    /// N * log2(eta); 0 when the vocabulary is empty.
    double volume() const;
    /// (eta1 / 2) * (N2 / eta2); 0 when there are no distinct operands.
    double difficulty() const;

    bool operator==(const HalsteadCounts&) const = default;
};

/// Control-flow graph shape of one function. Multiple returns share a single
/// virtual exit node, so `exits` is always 1.
struct ControlFlowSummary {
    std::size_t edges = 0;
    std::size_t nodes = 0;
    std::size_t exits = 1;
    std::size_t decision_points = 0;

    /// e - n + 2p
    long long cyclomatic() const {
        return static_cast<long long>(edges) - static_cast<long long>(nodes) + 2 * static_cast<long long>(exits);
    }
};

struct FunctionMetrics {
    std::string name;
    int line = 0;
    /// 1 + decision points.
    int cc = 1;
    ControlFlowSummary cfg;
};

struct SourceAnalysis {
    MetricVector metrics; // cc, hv, hd, sloc
    HalsteadCounts halstead;
    std::vector<FunctionMetrics> functions;
    /// Import targets (dotted names) for profiles with coupling support.
    std::vector<std::string> imports;
};

class LanguageProfile {
public:
    virtual ~LanguageProfile() = default;
    virtual std::string_view id() const = 0;
    virtual bool supports_coupling() const = 0;
    /// Whether a repository path is source this profile analyzes.
    virtual bool accepts_path(std::string_view path) const = 0;
    virtual SourceAnalysis analyze(std::string_view text) const = 0;
};

/// Looks up a registered profile ("c-family", "java-like"). Throws UnknownProfile.
const LanguageProfile& find_profile(std::string_view id);
std::vector<std::string> registered_profiles();

/// Full analysis including per-function detail. Throws UnknownProfile, or
/// ParseFailure for oversize, binary or irrecoverably malformed input.
SourceAnalysis analyze_source_detailed(std::string_view text, std::string_view profile_id);

/// cc, hv, hd and sloc of one file; coupling fields stay absent.
MetricVector analyze_source(std::string_view text, std::string_view profile_id);

// Building blocks of the c-family analysis, exposed for tests.

/// Halstead operator/operand tally over a token stream.
HalsteadCounts count_halstead(std::span<const Token> tokens);

/// Whether tokens[i] is a branching construct: if, for, while, case, catch,
/// &&, || or a conditional-expression `?`.
bool is_decision_point(std::span<const Token> tokens, std::size_t i);

struct FunctionSpan {
    std::string name;
    int line = 0;
    std::size_t open = 0;  // index of the body's '{'
    std::size_t close = 0; // index of the matching '}'
};

/// Index of the matching bracket for every bracket token; npos elsewhere.
std::vector<std::size_t> match_brackets(std::span<const Token> tokens);

/// Function bodies outside other function bodies. Nested lambdas and local
/// functions belong to their enclosing function.
std::vector<FunctionSpan> find_functions(std::span<const Token> tokens, std::span<const std::size_t> match);

/// Builds the structured CFG of a function body and summarizes its shape.
ControlFlowSummary summarize_control_flow(std::span<const Token> tokens, std::span<const std::size_t> match,
                                          const FunctionSpan& fn);

/// Dotted names of `import a.b.C;` / `import a.b.*;` / `import static a.b.C.m;`.
std::vector<std::string> extract_imports(std::span<const Token> tokens);

struct Coupling {
    int ca = 0;
    int ce = 0;
    bool operator==(const Coupling&) const = default;
};

/// Resolves per-file import lists against the file set (internal coupling only).
std::map<std::string, Coupling> resolve_coupling(const std::map<std::string, std::vector<std::string>>& imports);

/// Afferent/efferent coupling over a set of files. Throws UnknownProfile or
/// ProfileLacksCoupling.
std::map<std::string, Coupling> analyze_coupling(const std::map<std::string, std::string>& files,
                                                 std::string_view profile_id);

} // namespace qualex
