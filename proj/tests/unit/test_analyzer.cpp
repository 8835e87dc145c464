#include "oracles.hpp"

#include "qualex/analyzer.hpp"
#include "qualex/errors.hpp"
#include "qualex/lexer.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace qualex;
using namespace qualex::testing;

namespace {

HalsteadCounts tally(const MetricFixture& f) {
    HalsteadCounts h;
    h.total_operators = f.operators.size();
    h.distinct_operators = std::set<std::string>(f.operators.begin(), f.operators.end()).size();
    h.total_operands = f.operands.size();
    h.distinct_operands = std::set<std::string>(f.operands.begin(), f.operands.end()).size();
    return h;
}

} // namespace

TEST_CASE("hand-analyzed fixtures") {
    for (const auto& f : metric_fixtures()) {
        CAPTURE(f.name);
        const SourceAnalysis a = analyze_source_detailed(f.source, "c-family");
        REQUIRE(a.functions.size() == f.cfgs.size());
        int max_cc = 0;
        for (std::size_t i = 0; i < f.cfgs.size(); ++i) {
            CAPTURE(f.cfgs[i].function);
            CHECK(a.functions[i].name == f.cfgs[i].function);
            CHECK(a.functions[i].cc == f.cfgs[i].cyclomatic());
            CHECK(a.functions[i].cfg.cyclomatic() == a.functions[i].cc);
            max_cc = std::max(max_cc, a.functions[i].cc);
        }
        CHECK(*a.metrics.cc == max_cc);
        const HalsteadCounts expected = tally(f);
        CHECK(a.halstead.distinct_operators == expected.distinct_operators);
        CHECK(a.halstead.total_operators == expected.total_operators);
        CHECK(a.halstead.distinct_operands == expected.distinct_operands);
        CHECK(a.halstead.total_operands == expected.total_operands);
        CHECK(*a.metrics.sloc == f.sloc);
    }
}

TEST_CASE("empty file") {
    const MetricVector v = analyze_source("", "c-family");
    CHECK(*v.cc == 0);
    CHECK(*v.hv == 0);
    CHECK(*v.hd == 0);
    CHECK(*v.sloc == 0);
    CHECK_FALSE(v.ca);
    CHECK_FALSE(v.ce);
}

TEST_CASE("straight-line function has cc 1") {
    CHECK(*analyze_source("void f() { int a = 1; a = a + 2; g(a); }", "c-family").cc == 1);
}

TEST_CASE("Halstead formulas on a 2/2/2/2 tally") {
    HalsteadCounts h{2, 2, 2, 2};
    CHECK(h.volume() == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(h.difficulty() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("one if and one for gives cc 3") {
    CHECK(*analyze_source("int f(int n){ if (n) n++; for (;;) break; return n; }", "c-family").cc == 3);
}

TEST_CASE("duplicating a token stream increases hv") {
    const std::string body = "int f(int a) { return a * 2 + g(a); }\n";
    const double once = *analyze_source(body, "c-family").hv;
    const double twice = *analyze_source(body + body, "c-family").hv;
    CHECK(twice > once);
}

TEST_CASE("decision points") {
    auto count = [](std::string_view src) {
        const LexedSource lx = lex_c_family(src);
        int n = 0;
        for (std::size_t i = 0; i < lx.tokens.size(); ++i) n += is_decision_point(lx.tokens, i) ? 1 : 0;
        return n;
    };
    CHECK(count("if (a) b; else c;") == 1);
    CHECK(count("do { x(); } while (y);") == 1);
    CHECK(count("List<?> a; Map<K, ? extends V> b; Set<? super T> c;") == 0);
    CHECK(count("x = a ? b : c;") == 1);
    CHECK(count("obj.if_ready(); p->for_each(f);") == 0);
    CHECK(count("a && b || c") == 2);
    CHECK(count("switch (k) { case 1: case 2: break; default: break; }") == 2);
}

TEST_CASE("lexer literal forms") {
    const LexedSource lx = lex_c_family(
        "auto r = R\"x(if ( && )x\"; auto t = `a ${b ? 1 : 2} c`; s = /if+/g; n = 1'000.5e-3; "
        "q = \"\"\"\n text block if\n\"\"\";");
    int strings = 0;
    for (const auto& t : lx.tokens) strings += t.kind == TokenKind::String ? 1 : 0;
    CHECK(strings >= 4);
    int decisions = 0;
    for (std::size_t i = 0; i < lx.tokens.size(); ++i) decisions += is_decision_point(lx.tokens, i) ? 1 : 0;
    CHECK(decisions == 0); // a template literal is one opaque operand
}

TEST_CASE("unbalanced brackets fail to parse") {
    CHECK_THROWS_AS(analyze_source("int f( { ", "c-family"), ParseFailure);
}

TEST_CASE("oversize and binary input are rejected") {
    CHECK_THROWS_AS(analyze_source(std::string(kMaxAnalyzableBytes + 1, 'a'), "c-family"), ParseFailure);
    CHECK_THROWS_AS(analyze_source(std::string("int a;\0int b;", 13), "c-family"), ParseFailure);
}

TEST_CASE("unknown profile") { CHECK_THROWS_AS(analyze_source("", "cobol"), UnknownProfile); }

TEST_CASE("profiles accept their extensions") {
    CHECK(find_profile("c-family").accepts_path("src/a.cpp"));
    CHECK(find_profile("c-family").accepts_path("web/app.tsx"));
    CHECK_FALSE(find_profile("c-family").accepts_path("README.md"));
    CHECK(find_profile("java-like").accepts_path("a/B.java"));
    CHECK_FALSE(find_profile("java-like").accepts_path("a/b.cpp"));
}

TEST_CASE("coupling") {
    SUBCASE("isolated file") {
        auto c = analyze_coupling({{"src/a/A.java", "package a; class A {}"}}, "java-like");
        CHECK(c.at("src/a/A.java") == Coupling{0, 0});
    }
    SUBCASE("A imports B") {
        auto c = analyze_coupling({{"src/a/A.java", "package a; import b.B; class A { B b; }"},
                                   {"src/b/B.java", "package b; public class B {}"}},
                                  "java-like");
        CHECK(c.at("src/a/A.java") == Coupling{0, 1});
        CHECK(c.at("src/b/B.java") == Coupling{1, 0});
    }
    SUBCASE("mutual imports") {
        auto c = analyze_coupling({{"a/A.java", "package a; import b.B; class A {}"},
                                   {"b/B.java", "package b; import a.A; class B {}"}},
                                  "java-like");
        CHECK(c.at("a/A.java") == Coupling{1, 1});
        CHECK(c.at("b/B.java") == Coupling{1, 1});
    }
    SUBCASE("wildcard, static and external imports") {
        auto c = analyze_coupling({{"x/A.java", "import y.*; import static y.B.helper; import java.util.List;"},
                                   {"y/B.java", "class B {}"},
                                   {"y/C.java", "class C {}"}},
                                  "java-like");
        CHECK(c.at("x/A.java").ce == 2);
        CHECK(c.at("y/B.java").ca == 1);
        CHECK(c.at("y/C.java").ca == 1);
    }
    SUBCASE("sum of Ca equals sum of Ce") {
        auto c = analyze_coupling({{"p/A.java", "import q.B; import q.C;"},
                                   {"q/B.java", "import q.C; import r.D;"},
                                   {"q/C.java", "import p.A;"},
                                   {"r/D.java", ""}},
                                  "java-like");
        int ca = 0, ce = 0;
        for (const auto& [_, v] : c) {
            ca += v.ca;
            ce += v.ce;
        }
        CHECK(ca == ce);
        CHECK(ce == 5);
    }
    CHECK_THROWS_AS(analyze_coupling({{"a.c", ""}}, "c-family"), ProfileLacksCoupling);
}
