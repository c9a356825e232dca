#include <doctest.h>

#include "equiv_corpus.hpp"
#include "matheval/expr.hpp"

#include <random>

using namespace matheval;
using namespace matheval::sym;

TEST_CASE("like terms merge and numerals fold") {
    CHECK(equal(canonicalize(parse_latex("2x+x")),
                make_nary(Kind::Mul, {make_int(3), make_variable("x")})));
    CHECK(equal(canonicalize(parse_latex("x-x")), make_int(0)));
    CHECK(equal(canonicalize(parse_latex("x\\cdot x")),
                make_binary(Kind::Pow, make_variable("x"), make_int(2))));
    CHECK(equal(canonicalize(parse_latex("\\frac{4}{6}")), make_number(Rational(2, 3))));
    CHECK(equal(canonicalize(parse_latex("--x")), canonicalize(parse_latex("x"))));
    CHECK(equal(canonicalize(parse_latex("2+3\\cdot4")), make_int(14)));
}

TEST_CASE("radical canonical forms") {
    CHECK(equal(canonicalize(parse_latex("\\sqrt{4}")), make_int(2)));
    CHECK(equal(canonicalize(parse_latex("\\sqrt{\\frac{9}{4}}")), make_number(Rational(3, 2))));
    // sqrt(3)/3 and 1/sqrt(3) share one canonical form
    CHECK(equal(canonicalize(parse_latex("\\sqrt{3}/3")),
                canonicalize(parse_latex("1/\\sqrt{3}"))));
    CHECK(equal(canonicalize(parse_latex("\\sqrt{12}")),
                canonicalize(parse_latex("2\\sqrt{3}"))));
    CHECK(equal(canonicalize(parse_latex("\\sqrt{x}\\sqrt{x}")), make_variable("x")));
}

TEST_CASE("powers of sums stay unexpanded") {
    ExprPtr e = canonicalize(parse_latex("(a-b)^2"));
    REQUIRE(e->kind == Kind::Pow);
    CHECK(e->kids[1]->number == Rational(2));
    CHECK(e->kids[0]->kind == Kind::Add);
}

TEST_CASE("canonicalize is idempotent on parsed answers") {
    const char* answers[] = {
        "2x+x",          "(a-b)^2",        "1/\\sqrt{3}",      "\\sqrt{3}/3",
        "x^2-1",         "(x-1)(x+1)",     "\\frac{a+b}{c}",   "3\\sqrt{2}+\\sqrt{8}",
        "e^{\\pi i}",    "\\sin(x)^2",     "x/2+x/3",          "2^{10}x",
        "[2,5)",         "(-8,-8\\sqrt{3})", "y=4x-10",        "x_1+2x_1",
        "\\binom{5}{2}", "5!x",            "\\sqrt[3]{-8}x",   "1/2x",
    };
    for (const char* s : answers) {
        ExprPtr once = canonicalize(parse_latex(s));
        ExprPtr twice = canonicalize(once);
        CAPTURE(s);
        CHECK(equal(once, twice));
    }
}

TEST_CASE("canonicalize is idempotent on random expressions") {
    std::mt19937_64 gen(0xC0FFEE);
    for (int i = 0; i < 300; ++i) {
        ExprPtr e = equiv_corpus::gen_expr(gen, 3);
        ExprPtr once = canonicalize(e);
        ExprPtr twice = canonicalize(once);
        CAPTURE(to_string(e));
        REQUIRE(equal(once, twice));
    }
}

TEST_CASE("budget exhaustion returns a flagged best-effort form") {
    ExprPtr e = parse_latex("(x+1)(x+2)(x+3)(x+4)");
    CanonicalResult r = canonicalize(e, 3);
    CHECK_FALSE(r.complete);
    CHECK(r.expr != nullptr);
    CanonicalResult full = canonicalize(e, 100000);
    CHECK(full.complete);
}

TEST_CASE("canonical ordering is deterministic") {
    ExprPtr a = canonicalize(parse_latex("y+x+3+z"));
    ExprPtr b = canonicalize(parse_latex("3+z+x+y"));
    CHECK(equal(a, b));
    ExprPtr c = canonicalize(parse_latex("y x 2"));
    ExprPtr d = canonicalize(parse_latex("2xy"));
    CHECK(equal(c, d));
}
