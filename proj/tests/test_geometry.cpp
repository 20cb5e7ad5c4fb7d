#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "ualgeo/error.hpp"
#include "ualgeo/geometry.hpp"

using namespace ualgeo;
using namespace testing;

namespace {

std::vector<Equation> parse_all(TermStore& store, unsigned n, std::initializer_list<const char*> lines) {
    std::vector<Equation> out;
    for (const char* l : lines) out.push_back(parse_equation(l, store, n));
    return out;
}

PointSet points_of(unsigned m, unsigned n, std::initializer_list<std::vector<Element>> pts) {
    PointSet s(m, n);
    for (const auto& p : pts) s.insert(encode_point(p, m));
    return s;
}

PointSet brute_solve(const FiniteAlgebra& a, const TermStore& store, const std::vector<Equation>& eqs, unsigned n) {
    PointSet s(a.size(), n);
    const auto pts = all_points(a.size(), n);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        bool ok = true;
        for (const auto& eq : eqs)
            ok = ok && eval_naive(store, eq.lhs, a, pts[p]) == eval_naive(store, eq.rhs, a, pts[p]);
        if (ok) s.insert(p);
    }
    return s;
}

// All intersections of equalizers of pairs of term functions, plus A^n.
std::set<std::vector<bool>> brute_lattice(const FiniteAlgebra& a, unsigned n) {
    const auto clone = naive_clone(a, n);
    const std::vector<std::vector<Element>> fs(clone.begin(), clone.end());
    const std::size_t points = all_points(a.size(), n).size();
    std::set<std::vector<bool>> basic;
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i; j < fs.size(); ++j) {
            std::vector<bool> v(points);
            for (std::size_t p = 0; p < points; ++p) v[p] = fs[i][p] == fs[j][p];
            basic.insert(v);
        }
    basic.insert(std::vector<bool>(points, true));
    std::set<std::vector<bool>> out = basic;
    bool grew = true;
    while (grew) {
        grew = false;
        const std::vector<std::vector<bool>> cur(out.begin(), out.end());
        for (const auto& x : cur)
            for (const auto& y : basic) {
                std::vector<bool> z(points);
                for (std::size_t p = 0; p < points; ++p) z[p] = x[p] && y[p];
                grew |= out.insert(z).second;
            }
    }
    return out;
}

std::vector<bool> bits(const PointSet& s) {
    std::vector<bool> v(s.universe());
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = s.contains(p);
    return v;
}

struct Setup {
    FiniteAlgebra a;
    std::shared_ptr<TermStore> store;
    TermFunctionAlgebra f;
    Setup(FiniteAlgebra alg, unsigned n)
        : a(std::move(alg)), store(store_for(a)), f(TermFunctionAlgebra::build(a, store, n)) {}
};

}  // namespace

TEST_CASE("solve examples") {
    const FiniteAlgebra a = z2_xor();
    TermStore store(a.signature());
    CHECK(solve(a, store, {}, 2) == PointSet::full(2, 2));
    CHECK(solve(a, store, parse_all(store, 2, {"mul(x1,x2) ~ e"}), 2) == points_of(2, 2, {{0, 0}, {1, 1}}));
    CHECK(solve(a, store, parse_all(store, 2, {"x1 ~ mul(x1,x1)"}), 2) == points_of(2, 2, {{0, 0}, {0, 1}}));
    CHECK(format_tuples(solve(a, store, parse_all(store, 2, {"mul(x1,x2) ~ e"}), 2)) == "{(0,0),(1,1)}");
}

TEST_CASE("consistency") {
    const FiniteAlgebra a = z2_xor();
    TermStore store(a.signature());
    CHECK(is_consistent(a, store, {}, 2));
    CHECK(is_consistent(a, store, parse_all(store, 0, {"e ~ inv(e)"}), 0));
    const FiniteAlgebra c = a.with_coefficients();
    TermStore cs(c.signature());
    CHECK_FALSE(is_consistent(c, cs, parse_all(cs, 1, {"@0 ~ @1"}), 1));
}

TEST_CASE("open complements and V*") {
    const FiniteAlgebra a = z2_xor();
    TermStore store(a.signature());
    const auto eq = parse_all(store, 2, {"mul(x1,x2) ~ e", "x1 ~ x1"});
    CHECK(open_complement(a, store, eq[0], 2) == points_of(2, 2, {{0, 1}, {1, 0}}));
    CHECK(open_complement(a, store, eq[1], 2).is_empty());

    System finite{{eq[0]}, {}};
    CHECK(v_star(a, store, finite, 2).is_full());
    System family{{}, {eq[0]}};
    CHECK(v_star(a, store, family, 2) == points_of(2, 2, {{0, 0}, {1, 1}}));

    const FiniteAlgebra c = a.with_coefficients();
    TermStore cs(c.signature());
    System inconsistent_prefix{parse_all(cs, 2, {"@0 ~ @1"}), parse_all(cs, 2, {"x1 ~ x1"})};
    CHECK(v_star(c, cs, inconsistent_prefix, 2).is_full());
}

TEST_CASE("radical examples") {
    {
        Setup s(z2_xor(), 2);
        const RadicalIdeal full = radical_of_set(s.f, PointSet::full(2, 2));
        CHECK(full.classes() == s.f.size());
        CHECK(radical_of_set(s.f, PointSet::empty(2, 2)).classes() == 1);
        const auto eqs = parse_all(*s.store, 2, {"mul(x1,x2) ~ e"});
        const RadicalIdeal r = radical_of_system(s.f, *s.store, eqs);
        CHECK(r.classes() == 2);
        const auto x1 = s.f.element_of(s.store->variable(0)), x2 = s.f.element_of(s.store->variable(1));
        const auto m = s.f.element_of(parse_term("mul(x1,x2)", *s.store, 2));
        const auto e = s.f.element_of(parse_term("e", *s.store, 0));
        CHECK(r.related(x1, x2));
        CHECK(r.related(m, e));
        CHECK_FALSE(r.related(x1, e));
        CHECK(r.contains(s.f, parse_term("mul(x1,x2)", *s.store, 2), parse_term("e", *s.store, 0)));
    }
    {
        Setup s(z2_xor(), 1);
        CHECK(radical_of_set(s.f, points_of(2, 1, {{0}})).classes() == 1);
    }
}

TEST_CASE("closure examples") {
    {
        Setup s(left_zero(), 3);
        const PointSet y = points_of(2, 3, {{0, 0, 0}, {1, 1, 1}, {0, 0, 1}});
        const PointSet c = algebraic_closure(s.f, y);
        CHECK(c.count() == 4);
        CHECK(c == points_of(2, 3, {{0, 0, 0}, {0, 0, 1}, {1, 1, 0}, {1, 1, 1}}));
    }
    {
        const FiniteAlgebra a = z2_xor().with_coefficients();
        Setup s(a, 2);
        CHECK(algebraic_closure(s.f, PointSet::empty(2, 2)).is_empty());
        const PointSet pt = points_of(2, 2, {{1, 0}});
        CHECK(algebraic_closure(s.f, pt) == pt);
    }
}

TEST_CASE("lattice examples") {
    {
        Setup s(trivial_algebra(z2_xor().signature(), "t"), 2);
        CHECK(ZariskiLattice::build(s.f).size() == 1);
    }
    {
        Setup s(z2_xor(), 1);
        const auto l = ZariskiLattice::build(s.f);
        CHECK(l.size() == 2);
        CHECK(l.contains(points_of(2, 1, {{0}})));
        CHECK(is_equational_domain(l).domain);
    }
    {
        Setup s(left_zero(), 2);
        const auto l = ZariskiLattice::build(s.f);
        CHECK(l.size() == 2);
        CHECK(l.contains(points_of(2, 2, {{0, 0}, {1, 1}})));
    }
}

TEST_CASE("left-zero semigroup is not an equational domain at n=3") {
    Setup s(left_zero(), 3);
    const auto l = ZariskiLattice::build(s.f);
    std::multiset<std::size_t> sizes;
    for (const auto& m : l.members()) sizes.insert(m.count());
    CHECK(sizes == std::multiset<std::size_t>{2, 4, 4, 4, 8});
    const auto rep = is_equational_domain(l);
    CHECK_FALSE(rep.domain);
    REQUIRE(rep.counterexample);
    const PointSet u = l.member(rep.counterexample->first) | l.member(rep.counterexample->second);
    CHECK(u.count() == 6);
    CHECK_FALSE(l.contains(u));
    CHECK(zariski_closure(l, u) == u);
    CHECK(algebraic_closure(s.f, u).is_full());

    const auto parts = irreducible_decomposition(l, u);
    REQUIRE(parts.size() == 2);
    CHECK((parts[0] | parts[1]) == u);
    CHECK_FALSE(parts[0].subset_of(parts[1]));
    CHECK_FALSE(parts[1].subset_of(parts[0]));
    // two of three coordinates always agree, so A^3 splits into the three diagonals
    const auto top = irreducible_decomposition(l, PointSet::full(2, 3));
    REQUIRE(top.size() == 3);
    for (const auto& c : top) CHECK(c.count() == 4);
    CHECK_THROWS_AS(irreducible_decomposition(l, points_of(2, 3, {{0, 1, 0}})), Error);
}

TEST_CASE("coordinate algebras") {
    Setup s(z2_xor(), 2);
    const auto full = coordinate_algebra(s.f, PointSet::full(2, 2));
    CHECK(full.algebra.size() == s.f.size());
    const PointSet diag = points_of(2, 2, {{0, 0}, {1, 1}});
    const auto c = coordinate_algebra(s.f, diag);
    CHECK(c.algebra.size() == 2);
    CHECK(check_coordinate_isomorphism(s.f, radical_of_set(s.f, diag), c).ok());
    const PointSet one = points_of(2, 2, {{1, 0}});
    std::set<Element> values;
    for (std::uint32_t e = 0; e < s.f.size(); ++e) values.insert(s.f.values(e)[encode_point(std::vector<Element>{1, 0}, 2)]);
    CHECK(coordinate_algebra(s.f, one).algebra.size() == values.size());
}

TEST_CASE("property: solve agrees with pointwise evaluation") {
    std::mt19937_64 rng(31);
    for (const auto& a : small_algebras()) {
        TermStore store(a.signature());
        for (unsigned n = 1; n <= 2; ++n)
            for (int k = 0; k < 10; ++k) {
                const auto eqs = random_system(store, n, 3, 1 + rng() % 4, rng);
                CHECK(solve(a, store, eqs, n) == brute_solve(a, store, eqs, n));
                const auto each = solve_each(a, store, eqs, n);
                for (std::size_t i = 0; i < eqs.size(); ++i)
                    CHECK(each[i] == brute_solve(a, store, {eqs[i]}, n));
            }
    }
}

TEST_CASE("property: the lattice is the meet closure of equalizers") {
    for (const auto& a : small_algebras())
        for (unsigned n = 1; n <= 2; ++n) {
            if (a.size() == 3 && n == 2) continue;  // naive clone too large
            Setup s(a, n);
            const auto l = ZariskiLattice::build(s.f);
            std::set<std::vector<bool>> got;
            for (const auto& m : l.members()) got.insert(bits(m));
            CHECK(got == brute_lattice(a, n));
            CHECK(l.members().back().is_full());
            for (std::size_t i = 0; i + 1 < l.size(); ++i) CHECK(size_lex_less(l.member(i), l.member(i + 1)));
            for (std::size_t i = 0; i < l.size(); ++i) {
                CHECK(l.find(l.member(i)) == i);
                CHECK(solve(s.a, *s.store, l.defining_system(i), n) == l.member(i));
            }
        }
}

TEST_CASE("property: radicals are congruences and match restriction") {
    std::mt19937_64 rng(37);
    for (const auto& a : small_algebras()) {
        Setup s(a, 2);
        if (s.f.size() > 400) continue;  // the pairwise oracle is quadratic in |F|
        for (int k = 0; k < 8; ++k) {
            PointSet y(a.size(), 2);
            for (std::size_t p = 0; p < y.universe(); ++p)
                if (rng() % 2) y.insert(p);
            const RadicalIdeal r = radical_of_set(s.f, y);
            CHECK(is_congruence(s.f, r).ok);
            for (std::uint32_t i = 0; i < s.f.size(); ++i)
                for (std::uint32_t j = 0; j < s.f.size(); ++j) {
                    bool agree = true;
                    for (std::size_t p : y.members()) agree = agree && s.f.values(i)[p] == s.f.values(j)[p];
                    CHECK(r.related(i, j) == agree);
                }
            // V(Rad(Y)) through the lattice: the smallest member over Y
            const auto l = ZariskiLattice::build(s.f);
            PointSet want = PointSet::full(a.size(), 2);
            for (const auto& m : l.members())
                if (y.subset_of(m)) want &= m;
            CHECK(algebraic_closure(s.f, y) == want);
            const auto c = coordinate_algebra(s.f, y);
            CHECK(check_coordinate_isomorphism(s.f, r, c).ok());
        }
    }
}

TEST_CASE("property: radical inclusion reverses set inclusion") {
    Setup s(random_binary(3, 11, "r"), 2);
    std::mt19937_64 rng(41);
    for (int k = 0; k < 30; ++k) {
        PointSet big(3, 2);
        for (std::size_t p = 0; p < 9; ++p)
            if (rng() % 3) big.insert(p);
        PointSet small = big;
        for (std::size_t p = 0; p < 9; ++p)
            if (rng() % 2) small.erase(p);
        CHECK(radical_of_set(s.f, big).subset_of(radical_of_set(s.f, small)));
    }
}

TEST_CASE("point set text forms round-trip") {
    std::mt19937_64 rng(43);
    for (unsigned m : {1u, 2u, 3u})
        for (unsigned n : {0u, 1u, 2u, 3u}) {
            PointSet s(m, n);
            for (std::size_t p = 0; p < s.universe(); ++p)
                if (rng() % 2) s.insert(p);
            CHECK(parse_tuples(format_tuples(s), m, n) == s);
            CHECK(parse_hex(format_hex(s)) == s);
        }
    CHECK(format_tuples(PointSet::full(1, 0)) == "{()}");
    CHECK(format_hex(points_of(2, 2, {{0, 0}, {1, 1}})) == "n=2 m=2 bits=9");
}
