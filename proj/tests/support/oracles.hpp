#pragma once

// Hand-derived reference data shared by the unit and acceptance suites.

#include "qualex/metrics.hpp"

#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qualex::testing {

struct MarkCase {
    Metric metric;
    double raw;
    double mark;
};

// Table 1 marks evaluated by hand (30-digit arithmetic), default thresholds.
inline const std::vector<MarkCase> kMarkCases = {
    {Metric::Cc, 0.0, 3.0},
    {Metric::Cc, 1.0, 3.0},
    {Metric::Cc, 1.5, 3.0},
    {Metric::Cc, 2.0, 2.6918003852647122639},
    {Metric::Cc, 3.0, 2.2081790273476246753},
    {Metric::Cc, 5.0, 1.4859942891369484248},
    {Metric::Cc, 7.0, 1.0},
    {Metric::Cc, 10.0, 0.55204475683690616882},
    {Metric::Cc, 12.5, 0.33647504815808903299},
    {Metric::Cc, 19.0, 0.09287464307105927655},
    {Metric::Cc, 19.5, 0.0},
    {Metric::Cc, 20.0, 0.0},
    {Metric::Cc, 40.0, 0.0},
    {Metric::Hv, 0.0, 3.0},
    {Metric::Hv, 5.0, 3.0},
    {Metric::Hv, 19.99, 3.0},
    {Metric::Hv, 20.0, 2.94},
    {Metric::Hv, 100.0, 2.7},
    {Metric::Hv, 250.5, 2.2485},
    {Metric::Hv, 500.0, 1.5},
    {Metric::Hv, 999.0, 0.003},
    {Metric::Hv, 1000.0, 0.0},
    {Metric::Hv, 1000.5, 0.0},
    {Metric::Hv, 2000.0, 0.0},
    {Metric::Hv, 12345.0, 0.0},
    {Metric::Hd, 0.0, 3.0},
    {Metric::Hd, 3.0, 3.0},
    {Metric::Hd, 9.5, 3.0},
    {Metric::Hd, 10.0, 2.4},
    {Metric::Hd, 12.0, 2.28},
    {Metric::Hd, 25.0, 1.5},
    {Metric::Hd, 33.3, 1.002},
    {Metric::Hd, 49.0, 0.06},
    {Metric::Hd, 50.0, 0.0},
    {Metric::Hd, 50.01, 0.0},
    {Metric::Hd, 75.0, 0.0},
    {Metric::Hd, 400.0, 0.0},
    {Metric::Ca, 0.0, 3.0},
    {Metric::Ca, 5.0, 3.0},
    {Metric::Ca, 18.0, 3.0},
    {Metric::Ca, 19.0, 2.9719885782738968496},
    {Metric::Ca, 23.0, 2.0},
    {Metric::Ca, 30.0, 1.0},
    {Metric::Ca, 37.0, 0.5},
    {Metric::Ca, 44.5, 0.23792378825265490248},
    {Metric::Ca, 59.0, 0.056607729016494166975},
    {Metric::Ca, 60.0, 0.051270959750477370698},
    {Metric::Ca, 61.0, 0.0},
    {Metric::Ca, 100.0, 0.0},
    {Metric::Ce, 0.0, 3.0},
    {Metric::Ce, 2.0, 3.0},
    {Metric::Ce, 5.9, 3.0},
    {Metric::Ce, 6.0, 3.0}, // 2^2 clamps to 3
    {Metric::Ce, 7.0, 2.8284271247461900976},
    {Metric::Ce, 8.0, 2.0},
    {Metric::Ce, 10.0, 1.0},
    {Metric::Ce, 13.0, 0.3535533905932737622},
    {Metric::Ce, 17.0, 0.08838834764831844055},
    {Metric::Ce, 19.0, 0.044194173824159220275},
    {Metric::Ce, 19.5, 0.0},
    {Metric::Ce, 30.0, 0.0},
};

// -log_3((3^0 + 3^-3) / 2)
inline constexpr double kGmZeroThreeLambda3 = 0.597826497267120302832544578575;

inline bool close_rel(double actual, double expected, double tol = 1e-12) {
    if (expected == 0.0) return actual == 0.0;
    return std::fabs(actual - expected) <= tol * std::fabs(expected);
}

/// Textbook GM, evaluated directly in long double.
inline long double naive_global_mark(const std::vector<double>& marks, double lambda) {
    long double sum = 0.0L;
    for (double m : marks) sum += std::pow(static_cast<long double>(lambda), -static_cast<long double>(m));
    return -std::log(sum / static_cast<long double>(marks.size())) / std::log(static_cast<long double>(lambda));
}

/// A hand-drawn control flow graph; nodes are named, p = 1.
struct HandCfg {
    std::string function;
    std::vector<std::pair<std::string, std::string>> edges;

    long long cyclomatic() const {
        std::set<std::string> nodes;
        for (const auto& [a, b] : edges) {
            nodes.insert(a);
            nodes.insert(b);
        }
        return static_cast<long long>(edges.size()) - static_cast<long long>(nodes.size()) + 2;
    }
};

struct MetricFixture {
    std::string name;
    std::string source;
    std::vector<HandCfg> cfgs;            // one per function, in source order
    std::vector<std::string> operators;   // every operator occurrence
    std::vector<std::string> operands;    // every operand occurrence
    int sloc;
};

// Hand analysis of small c-family sources. Operators: punctuation with
// bracket pairs counted once at the opener ("()", "[]", "{}"), control and
// computation keywords, call sites as "name()". Operands: identifiers,
// literals and literal keywords. Type and declaration keywords are neither.
inline const std::vector<MetricFixture>& metric_fixtures() {
    static const std::vector<MetricFixture> fixtures = {
        {"identity",
         "int f(int a) { return a; }",
         {{"f", {{"body", "exit"}}}},
         {"f()", "()", "{}", "return", ";"},
         {"a", "a"},
         1},
        {"single if",
         "int f(int a) { if (a) return 1; return 0; }",
         {{"f", {{"c", "r1"}, {"r1", "exit"}, {"c", "r0"}, {"r0", "exit"}}}},
         {"f()", "()", "{}", "if", "()", "return", ";", "return", ";"},
         {"a", "a", "1", "0"},
         1},
        {"for loop",
         "void f(int n) { for (int i = 0; i < n; i++) g(i); }",
         {{"f", {{"init", "cond"}, {"cond", "body"}, {"body", "inc"}, {"inc", "cond"}, {"cond", "exit"}}}},
         {"f()", "()", "{}", "for", "()", "=", ";", "<", ";", "++", "g()", "()", ";"},
         {"n", "i", "0", "i", "n", "i", "i"},
         1},
        {"if and for",
         "int f(int n) {\n  int s = 0;\n  if (n > 0) {\n    for (int i = 0; i < n; i++) s += i;\n  }\n  return s;\n}\n",
         {{"f",
           {{"decl", "c1"},
            {"c1", "init"},
            {"init", "c2"},
            {"c2", "body"},
            {"body", "inc"},
            {"inc", "c2"},
            {"c2", "ret"},
            {"c1", "ret"},
            {"ret", "exit"}}}},
         {"f()", "()", "{}", "=", ";", "if", "()", ">", "{}", "for", "()", "=", ";", "<", ";", "++", "+=", ";",
          "return", ";"},
         {"n", "s", "0", "n", "0", "i", "0", "i", "n", "i", "s", "i", "s"},
         7},
        {"short circuit and",
         "bool f(int a, int b) { return a > 0 && b > 0; }",
         {{"f", {{"t1", "t2"}, {"t1", "join"}, {"t2", "join"}, {"join", "exit"}}}},
         {"f()", "()", ",", "{}", "return", ">", "&&", ">", ";"},
         {"a", "b", "a", "0", "b", "0"},
         1},
        {"ternary",
         "int f(int a) { return a ? 1 : 2; }",
         {{"f", {{"c", "one"}, {"one", "exit"}, {"c", "two"}, {"two", "exit"}}}},
         {"f()", "()", "{}", "return", "?", ":", ";"},
         {"a", "a", "1", "2"},
         1},
        {"while loop",
         "void f(int n) { while (n > 0) n--; }",
         {{"f", {{"c", "body"}, {"body", "c"}, {"c", "exit"}}}},
         {"f()", "()", "{}", "while", "()", ">", "--", ";"},
         {"n", "n", "0", "n"},
         1},
        {"do while",
         "void f(int n) {\n  do {\n    n--;\n  } while (n > 0);\n}\n",
         {{"f", {{"body", "c"}, {"c", "body"}, {"c", "exit"}}}},
         {"f()", "()", "{}", "do", "{}", "--", ";", "while", "()", ">", ";"},
         {"n", "n", "n", "0"},
         5},
        {"switch",
         "int f(int k) {\n  switch (k) {\n  case 1: return 10;\n  case 2: return 20;\n  default: return 0;\n  }\n}\n",
         {{"f", {{"sw", "c1"}, {"c1", "exit"}, {"sw", "c2"}, {"c2", "exit"}, {"sw", "d"}, {"d", "exit"}}}},
         {"f()", "()", "{}", "switch", "()", "{}", "case", ":", "return", ";", "case", ":", "return", ";", "default",
          ":", "return", ";"},
         {"k", "k", "1", "10", "2", "20", "0"},
         7},
        {"else if chain",
         "int f(int x) {\n  if (x < 0) return -1;\n  else if (x == 0) return 0;\n  else return 1;\n}\n",
         {{"f",
           {{"c1", "r1"}, {"r1", "exit"}, {"c1", "c2"}, {"c2", "r2"}, {"r2", "exit"}, {"c2", "r3"}, {"r3", "exit"}}}},
         {"f()", "()", "{}", "if", "()", "<", "return", "-", ";", "else", "if", "()", "==", "return", ";", "else",
          "return", ";"},
         {"x", "x", "0", "1", "x", "0", "0", "1"},
         5},
        {"try catch",
         "int f() {\n  try { return g(); }\n  catch (int e) { return e; }\n}\n",
         {{"f", {{"t", "exit"}, {"t", "h"}, {"h", "exit"}}}},
         {"f()", "()", "{}", "try", "{}", "return", "g()", "()", ";", "catch", "()", "{}", "return", ";"},
         {"e", "e"},
         4},
        {"break in loop",
         "void f(int n) {\n  for (int i = 0; i < n; i++) {\n    if (i == 3) break;\n    g(i);\n  }\n}\n",
         {{"f",
           {{"init", "c"},
            {"c", "t"},
            {"t", "exit"},
            {"t", "call"},
            {"call", "inc"},
            {"inc", "c"},
            {"c", "exit"}}}},
         {"f()", "()", "{}", "for", "()", "=", ";", "<", ";", "++", "{}", "if", "()", "==", "break", ";", "g()", "()",
          ";"},
         {"n", "i", "0", "i", "n", "i", "i", "3", "i"},
         6},
        {"continue in loop",
         "void f(int n) {\n  while (n > 0) {\n    n--;\n    if (n % 2) continue;\n    g(n);\n  }\n}\n",
         {{"f", {{"c", "dec"}, {"dec", "t"}, {"t", "c"}, {"t", "call"}, {"call", "c"}, {"c", "exit"}}}},
         {"f()", "()", "{}", "while", "()", ">", "{}", "--", ";", "if", "()", "%", "continue", ";", "g()", "()", ";"},
         {"n", "n", "0", "n", "n", "2", "n"},
         7},
        {"short circuit or",
         "int f(int a, int b) { if (a || b) return 1; return 0; }",
         {{"f", {{"ta", "r1"}, {"ta", "tb"}, {"tb", "r1"}, {"tb", "r0"}, {"r1", "exit"}, {"r0", "exit"}}}},
         {"f()", "()", ",", "{}", "if", "()", "||", "return", ";", "return", ";"},
         {"a", "b", "a", "b", "1", "0"},
         1},
        {"java method",
         "class A {\n  int f(String s) {\n    if (s == null) return 0;\n    return s.length();\n  }\n}\n",
         {{"f", {{"c", "r0"}, {"r0", "exit"}, {"c", "r1"}, {"r1", "exit"}}}},
         {"{}", "f()", "()", "{}", "if", "()", "==", "return", ";", "return", ".", "length()", "()", ";"},
         {"A", "String", "s", "s", "null", "0", "s"},
         6},
        {"arrow function",
         "const f = (x) => { return x ? x * 2 : 0; };",
         {{"f", {{"c", "a"}, {"a", "exit"}, {"c", "b"}, {"b", "exit"}}}},
         {"=", "()", "=>", "{}", "return", "?", "*", ":", ";", ";"},
         {"f", "x", "x", "x", "2", "0"},
         1},
        {"nested if",
         "void f(int a, int b) {\n  if (a) {\n    if (b) g();\n  } else {\n    h();\n  }\n}\n",
         {{"f", {{"ca", "cb"}, {"cb", "g"}, {"g", "j"}, {"cb", "j"}, {"ca", "h"}, {"h", "j"}, {"j", "exit"}}}},
         {"f()", "()", ",", "{}", "if", "()", "{}", "if", "()", "g()", "()", ";", "else", "{}", "h()", "()", ";"},
         {"a", "b", "a", "b"},
         7},
        {"two functions",
         "int a() { return 1; }\nint b(int x) {\n  if (x) return 1;\n  if (x > 2) return 2;\n  return 3;\n}\n",
         {{"a", {{"body", "exit"}}},
          {"b",
           {{"c1", "r1"}, {"r1", "exit"}, {"c1", "c2"}, {"c2", "r2"}, {"r2", "exit"}, {"c2", "r3"}, {"r3", "exit"}}}},
         {"a()", "()", "{}", "return", ";", "b()", "()", "{}", "if", "()", "return", ";", "if", "()", ">", "return",
          ";", "return", ";"},
         {"1", "x", "x", "1", "x", "2", "2", "3"},
         6},
        {"comments and preprocessor",
         "#include <stdio.h>\n// if (a && b)\n/* while (x) */\nint f(int a) {\n  return a + 1; // for\n}\n",
         {{"f", {{"body", "exit"}}}},
         {"f()", "()", "{}", "return", "+", ";"},
         {"a", "a", "1"},
         4},
        {"keywords inside literals",
         "int f() {\n  puts(\"if (a && b)\");\n  return 'x' == '?' ? 1 : 0;\n}\n",
         {{"f", {{"s", "c"}, {"c", "one"}, {"c", "zero"}, {"one", "exit"}, {"zero", "exit"}}}},
         {"f()", "()", "{}", "puts()", "()", ";", "return", "==", "?", ":", ";"},
         {"\"if (a && b)\"", "'x'", "'?'", "1", "0"},
         4},
        {"catch chain with finally",
         "void f() {\n  try { g(); }\n  catch (A e) { h(); }\n  catch (B e) { k(); }\n  finally { m(); }\n}\n",
         {{"f", {{"t", "fin"}, {"t", "ha"}, {"ha", "fin"}, {"t", "hb"}, {"hb", "fin"}, {"fin", "exit"}}}},
         {"f()", "()", "{}", "try", "{}", "g()", "()", ";", "catch", "()", "{}", "h()", "()", ";", "catch", "()", "{}",
          "k()", "()", ";", "finally", "{}", "m()", "()", ";"},
         {"A", "e", "B", "e"},
         6},
        {"compound loop condition",
         "int f(int* p, int n) {\n  int c = 0;\n  for (int i = 0; i < n && p[i] != 0; ++i) c++;\n  return c;\n}\n",
         {{"f",
           {{"decl", "init"},
            {"init", "t1"},
            {"t1", "t2"},
            {"t1", "ret"},
            {"t2", "body"},
            {"t2", "ret"},
            {"body", "inc"},
            {"inc", "t1"},
            {"ret", "exit"}}}},
         {"f()", "()", "*", ",", "{}", "=", ";", "for", "()", "=", ";", "<", "&&", "[]", "!=", ";", "++", "++", ";",
          "return", ";"},
         {"p", "n", "c", "0", "i", "0", "i", "n", "p", "i", "0", "i", "c", "c"},
         5},
    };
    return fixtures;
}

} // namespace qualex::testing
