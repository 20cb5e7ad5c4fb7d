#include "doctest.h"
#include "support.hpp"
#include "ualgeo/error.hpp"

using namespace ualgeo;
using namespace testing;

namespace {

Signature group_sig() { return parse_signature("ops: mul/2, inv/1, e/0"); }

template <class Fn>
ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("signatures") {
    const Signature s = group_sig();
    REQUIRE(s.size() == 3);
    CHECK(s.symbols()[0] == Symbol{"mul", 2});
    CHECK(s.symbols()[1] == Symbol{"inv", 1});
    CHECK(s.symbols()[2] == Symbol{"e", 0});
    CHECK(parse_signature("ops:").size() == 0);
    CHECK(kind_of([] { parse_signature("ops: f/2, f/1"); }) == ErrorKind::Semantic);
    CHECK(print_signature(s) == "ops: mul/2, inv/1, e/0");
    CHECK_FALSE(is_valid_symbol_name("x3"));
    CHECK(is_valid_symbol_name("x"));
    CHECK(is_valid_symbol_name("xor"));
}

TEST_CASE("parsing and printing terms") {
    TermStore store(group_sig());
    const TermId t = parse_term("mul(x1, inv(x2))", store, 2);
    CHECK(store.kind(t) == TermKind::Apply);
    CHECK(store.symbol(t).value == 0);
    const auto kids = store.children(t);
    REQUIRE(kids.size() == 2);
    CHECK(kids[0] == store.variable(0));
    CHECK(store.symbol(kids[1]).value == 1);
    CHECK(store.print(t) == "mul(x1,inv(x2))");
    CHECK(store.depth(t) == 2);
    CHECK(store.variable_bound(t) == 2);

    const TermId x = parse_term("x1", store, 1);
    CHECK(store.kind(x) == TermKind::Variable);
    CHECK(store.variable_index(x) == 0);

    CHECK(kind_of([&] { parse_term("mul(x1)", store, 1); }) == ErrorKind::Semantic);
    CHECK(kind_of([&] { parse_term("x3", store, 2); }) == ErrorKind::Semantic);
    CHECK(kind_of([&] { parse_term("mul(x1,", store, 2); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { parse_term("@0", store, 2); }) == ErrorKind::Semantic);
}

TEST_CASE("hash consing shares structurally equal terms") {
    TermStore store(group_sig());
    CHECK(parse_term("mul(x1,e)", store, 1) == parse_term("mul( x1 , e )", store, 1));
    CHECK(parse_term("mul(x1,e)", store, 1) != parse_term("mul(e,x1)", store, 1));
}

TEST_CASE("coefficients") {
    TermStore store(group_sig().with_coefficients(2));
    const TermId c = parse_term("@1", store, 0);
    CHECK(store.kind(c) == TermKind::Coefficient);
    CHECK(store.coefficient_value(c) == 1);
    CHECK(kind_of([&] { parse_term("@2", store, 0); }) == ErrorKind::Semantic);
}

TEST_CASE("equations") {
    TermStore store(group_sig());
    const Equation eq = parse_equation("mul(x1,x2) ~ e", store, 2);
    CHECK(print_equation(store, eq) == "mul(x1,x2) ~ e");
    CHECK(kind_of([&] { parse_equation("x1 = x2", store, 2); }) == ErrorKind::Parse);
    CHECK(kind_of([&] { parse_equation("x1 ~ x2 ~ x1", store, 2); }) == ErrorKind::Parse);
    try {
        parse_equation("x1 ~ mul(x1,", store, 1);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() > 5);
    }
}

TEST_CASE("substitution is simultaneous") {
    TermStore store(parse_signature("ops: f/2, g/1, c/0"));
    auto term = [&](const char* s) { return parse_term(s, store, 2); };
    {
        const std::vector<TermId> b{term("g(x2)")};
        CHECK(substitute(store, term("x1"), b) == term("g(x2)"));
    }
    {
        const std::vector<TermId> b{term("c")};
        CHECK(substitute(store, term("f(x1,x1)"), b) == term("f(c,c)"));
    }
    {
        const std::vector<TermId> b{term("x2"), term("x1")};
        CHECK(substitute(store, term("f(x1,x2)"), b) == term("f(x2,x1)"));
    }
    {
        const std::vector<std::optional<TermId>> b{std::nullopt, term("c")};
        CHECK(substitute(store, term("f(x1,x2)"), b) == term("f(x1,c)"));
    }
}

TEST_CASE("eval_term examples") {
    const FiniteAlgebra a = z2_xor();
    TermStore store(a.signature());
    const std::vector<Element> p11{1, 1};
    CHECK(eval_term(store, parse_term("mul(x1,x2)", store, 2), a, p11) == 0);
    CHECK(eval_term(store, parse_term("e", store, 0), a, {}) == 0);
    for (Element u : {0, 1})
        for (Element v : {0, 1}) {
            const std::vector<Element> p{u, v};
            CHECK(eval_term(store, store.variable(0), a, p) == u);
        }
}

TEST_CASE("property: print then parse is the identity") {
    std::mt19937_64 rng(5);
    TermStore store(parse_signature("ops: f/2, g/1, c/0, h/3"));
    for (int i = 0; i < 500; ++i) {
        const TermId t = random_term(store, 3, 4, rng);
        CHECK(parse_term(store.print(t), store, 3) == t);
    }
}

TEST_CASE("property: substitution commutes with evaluation") {
    std::mt19937_64 rng(9);
    for (unsigned trial = 0; trial < 20; ++trial) {
        const FiniteAlgebra a = random_algebra(3, rng);
        TermStore store(a.signature());
        const TermId t = random_term(store, 2, 3, rng);
        const std::vector<TermId> sigma{random_term(store, 2, 2, rng), random_term(store, 2, 2, rng)};
        const TermId s = substitute(store, t, sigma);
        for (const auto& p : all_points(3, 2)) {
            const std::vector<Element> inner{eval_naive(store, sigma[0], a, p), eval_naive(store, sigma[1], a, p)};
            CHECK(eval_naive(store, s, a, p) == eval_naive(store, t, a, inner));
            CHECK(eval_term(store, t, a, p) == eval_naive(store, t, a, p));
        }
    }
}
