#include <set>

#include "doctest.h"
#include "support.hpp"
#include "ualgeo/error.hpp"
#include "ualgeo/free_algebra.hpp"

using namespace ualgeo;
using namespace testing;

TEST_CASE("power is componentwise") {
    const FiniteAlgebra a = z2_xor();
    const FiniteAlgebra p = power(a, 2);
    REQUIRE(p.size() == 4);
    const auto mul = *p.signature().find("mul");
    for (Element x = 0; x < 4; ++x)
        for (Element y = 0; y < 4; ++y) {
            // encode_point order: first coordinate most significant
            const Element want = static_cast<Element>(((x >> 1) ^ (y >> 1)) << 1 | ((x & 1) ^ (y & 1)));
            const std::vector<Element> args{x, y};
            CHECK(p.operate(mul, args) == want);
        }
    const FiniteAlgebra t = trivial_algebra(a.signature(), "t");
    CHECK(power(t, 3).size() == 1);
}

TEST_CASE("subuniverse closure") {
    const FiniteAlgebra a = z2_xor();
    const std::vector<Element> one{1}, zero{0}, both{0, 1};
    CHECK(subuniverse_closure(a, one) == both);
    CHECK(subuniverse_closure(a, zero) == zero);
    CHECK(subuniverse_closure(a, both) == both);
}

TEST_CASE("homomorphism checks") {
    const FiniteAlgebra a = z2_xor();
    const std::vector<Element> id{0, 1}, swap{1, 0}, to_zero{0, 0};
    CHECK(is_homomorphism(id, a, a).ok);
    const auto bad = is_homomorphism(swap, a, a);
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.violation);
    // swap(0*0) = 1 but swap(0)*swap(0) = 0
    CHECK(a.signature().symbol(bad.violation->symbol).name == "mul");
    CHECK(is_homomorphism(to_zero, a, a).ok);
}

TEST_CASE("term functions") {
    const FiniteAlgebra a = z2_xor();
    TermStore store(a.signature());
    CHECK(term_function(a, store, store.variable(0), 2).values == std::vector<Element>{0, 0, 1, 1});
    CHECK(term_function(a, store, parse_term("mul(x1,x1)", store, 1), 1).values == std::vector<Element>{0, 0});
    CHECK(term_function(a, store, parse_term("e", store, 0), 0).values == std::vector<Element>{0});
}

TEST_CASE("free algebra sizes") {
    auto size_of = [](const FiniteAlgebra& a, unsigned n) {
        return TermFunctionAlgebra::build(a, store_for(a), n).size();
    };
    CHECK(size_of(z2_xor(), 1) == 2);
    CHECK(size_of(z2_xor(), 2) == 4);
    CHECK(size_of(meet_semilattice(), 2) == 3);
    CHECK(size_of(left_zero(), 3) == 3);
    CHECK(size_of(trivial_algebra(z2_xor().signature(), "t"), 2) == 1);
}

TEST_CASE("free algebra witnesses denote their elements") {
    const FiniteAlgebra a = z2_xor();
    auto store = store_for(a);
    const auto f = TermFunctionAlgebra::build(a, store, 2);
    for (std::uint32_t e = 0; e < f.size(); ++e) {
        const auto v = f.values(e);
        CHECK(std::vector<Element>(v.begin(), v.end()) == table_of(*store, f.witness(e), a, 2));
        CHECK(f.element_of(f.witness(e)) == e);
    }
    std::set<std::string> names;
    for (std::uint32_t e = 0; e < f.size(); ++e) names.insert(store->print(f.witness(e)));
    CHECK(names == std::set<std::string>{"x1", "x2", "mul(x1,x2)", "e"});
}

TEST_CASE("relatively free generating sets") {
    const FiniteAlgebra a = z2_xor();
    const FiniteAlgebra f1 = to_finite_algebra(TermFunctionAlgebra::build(a, store_for(a), 1));
    // element 0 is the projection x1
    const std::vector<Element> x{0};
    CHECK(is_relatively_free_generating_set(f1, x));
    const FiniteAlgebra t = trivial_algebra(a.signature(), "t");
    const std::vector<Element> only{0};
    CHECK(is_relatively_free_generating_set(t, only));
    const std::vector<Element> zero{0};
    CHECK_THROWS_AS(is_relatively_free_generating_set(meet_semilattice(), zero), Error);
}

TEST_CASE("property: F(n) matches the naive clone") {
    std::mt19937_64 rng(21);
    std::vector<FiniteAlgebra> algebras = small_algebras();
    for (int i = 0; i < 6; ++i) algebras.push_back(random_algebra(2 + i % 2, rng));
    for (const auto& a : algebras)
        for (unsigned n = 0; n <= 2; ++n) {
            if (n == 0 && a.signature().size() == 1) continue;  // no closed terms
            if (a.size() == 3 && n == 2) continue;  // up to 3^9 functions; too slow for the naive oracle
            auto store = store_for(a);
            const auto f = TermFunctionAlgebra::build(a, store, n);
            const auto clone = naive_clone(a, n);
            std::set<std::vector<Element>> got;
            for (std::uint32_t e = 0; e < f.size(); ++e) {
                const auto v = f.values(e);
                got.emplace(v.begin(), v.end());
            }
            CHECK(got == clone);
            CHECK(f.size() == clone.size());
        }
}

TEST_CASE("property: closure methods agree and are closed") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10; ++i) {
        const FiniteAlgebra a = random_algebra(2 + i % 2, rng);
        const unsigned n = a.size() == 2 ? 3 : 1;
        auto store = store_for(a);
        const auto rows = TermFunctionAlgebra::build(a, store, n, Budget{}, ClosureMethod::Rows);
        const auto codes = TermFunctionAlgebra::build(a, store, n, Budget{}, ClosureMethod::Codes);
        REQUIRE(rows.size() == codes.size());
        CHECK(codes.method_used() == ClosureMethod::Codes);
        for (std::uint32_t e = 0; e < rows.size(); ++e) {
            const auto r = rows.values(e), c = codes.values(e);
            CHECK(std::equal(r.begin(), r.end(), c.begin(), c.end()));
            CHECK(rows.witness(e) == codes.witness(e));
        }
        CHECK(rows.is_closed());
        CHECK(codes.is_closed());
    }
}

TEST_CASE("budget errors are reported") {
    Budget tight;
    tight.max_free_elements = 10;
    const FiniteAlgebra a = random_binary(3, 3003, "big");
    CHECK_THROWS_AS(TermFunctionAlgebra::build(a, store_for(a), 2, tight), BudgetError);
}

TEST_CASE("restriction to a subset of points") {
    const FiniteAlgebra a = z2_xor();
    const auto f = TermFunctionAlgebra::build(a, store_for(a), 2);
    const std::vector<std::size_t> diag{0, 3};
    std::vector<std::uint32_t> q;
    const auto t = TermFunctionAlgebra::restrict(f, diag, &q);
    CHECK(t.size() == 2);
    REQUIRE(q.size() == f.size());
    for (std::uint32_t e = 0; e < f.size(); ++e) {
        const auto v = f.values(e), w = t.values(q[e]);
        CHECK(v[0] == w[0]);
        CHECK(v[3] == w[1]);
    }
}
