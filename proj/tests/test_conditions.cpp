#include <algorithm>
#include <map>

#include "doctest.h"
#include "support.hpp"
#include "ualgeo/conditions.hpp"
#include "ualgeo/error.hpp"

using namespace ualgeo;
using namespace testing;

namespace {

std::vector<Equation> parse_all(TermStore& store, unsigned n, std::initializer_list<const char*> lines) {
    std::vector<Equation> out;
    for (const char* l : lines) out.push_back(parse_equation(l, store, n));
    return out;
}

// Solution set as a bool vector, straight from the tables.
std::vector<bool> naive_solve(const FiniteAlgebra& a, const TermStore& s, const std::vector<Equation>& eqs,
                              std::uint32_t mask, unsigned n) {
    const auto pts = all_points(a.size(), n);
    std::vector<bool> out(pts.size(), true);
    for (std::size_t p = 0; p < pts.size(); ++p)
        for (std::size_t i = 0; i < eqs.size() && out[p]; ++i)
            if (mask >> i & 1) out[p] = eval_naive(s, eqs[i].lhs, a, pts[p]) == eval_naive(s, eqs[i].rhs, a, pts[p]);
    return out;
}

bool included(const std::vector<bool>& x, const std::vector<bool>& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] && !y[i]) return false;
    return true;
}

std::uint32_t mask_of(const std::vector<std::size_t>& idx) {
    std::uint32_t m = 0;
    for (auto i : idx) m |= 1u << i;
    return m;
}

bool brute_independent(const FiniteAlgebra& a, const TermStore& s, const std::vector<Equation>& eqs, unsigned n) {
    for (std::uint32_t sub = 1; sub < (1u << eqs.size()); ++sub) {
        const auto v = naive_solve(a, s, eqs, sub, n);
        bool some = false;
        for (std::size_t i = 0; i < eqs.size() && !some; ++i)
            if (sub >> i & 1) some = naive_solve(a, s, eqs, sub & ~(1u << i), n) != v;
        if (!some) return false;
    }
    return true;
}

bool brute_stable(const FiniteAlgebra& a, const TermStore& s, const std::vector<Equation>& eqs, unsigned n,
                  std::size_t k) {
    const std::uint32_t all = (1u << eqs.size()) - 1;
    const auto v = naive_solve(a, s, eqs, all, n);
    for (std::uint32_t removed = 1; removed < all; ++removed)
        if (static_cast<std::size_t>(__builtin_popcount(removed)) <= k && naive_solve(a, s, eqs, all & ~removed, n) != v)
            return false;
    return true;
}

std::size_t brute_min_witness(const FiniteAlgebra& a, const TermStore& s, const std::vector<Equation>& eqs,
                              const std::vector<bool>& target, unsigned n) {
    std::size_t best = eqs.size();
    for (std::uint32_t sub = 0; sub < (1u << eqs.size()); ++sub)
        if (included(naive_solve(a, s, eqs, sub, n), target))
            best = std::min<std::size_t>(best, __builtin_popcount(sub));
    return best;
}

// Longest strict chain in a finite poset given by `less`.
template <class Less>
std::size_t longest_chain(std::size_t count, Less less) {
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    std::vector<std::size_t> best(count, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = 0; j < count; ++j)
                if (less(i, j) && best[j] < best[i] + 1) {
                    best[j] = best[i] + 1;
                    changed = true;
                }
    }
    return count ? *std::max_element(best.begin(), best.end()) : 0;
}

struct Setup {
    FiniteAlgebra a;
    std::shared_ptr<TermStore> store;
    Setup(FiniteAlgebra alg) : a(std::move(alg)), store(store_for(a)) {}
};

}  // namespace

TEST_CASE("reduce_system examples") {
    const FiniteAlgebra a = z2_xor();
    TermStore store(a.signature());
    {
        const auto s = parse_all(store, 2, {"x1 ~ x1", "mul(x1,x1) ~ e"});
        const auto c = reduce_system(a, store, s, 2);
        CHECK(c.kept.empty());
        CHECK(c.verified);
        CHECK(c.solution.is_full());
    }
    {
        const auto s = parse_all(store, 2, {"mul(x1,x2) ~ e", "mul(x2,x1) ~ e"});
        const auto c = reduce_system(a, store, s, 2);
        CHECK(c.kept == std::vector<std::size_t>{0});
        CHECK(c.subsystem() == std::vector<Equation>{s[0]});
    }
    {
        const auto s = parse_all(store, 1, {"x1 ~ e", "x1 ~ e", "x1 ~ e"});
        CHECK(reduce_system(a, store, s, 1).kept == std::vector<std::size_t>{0});
    }
    {
        System family{parse_all(store, 2, {"x1 ~ e"}), parse_all(store, 2, {"x2 ~ e", "x1 ~ e"})};
        CHECK(consumed_equations(family).size() == 3);
        const auto c = reduce_system(a, store, family, 2);
        CHECK(c.kept == std::vector<std::size_t>{0, 1});
        CHECK(c.solution.count() == 1);
    }
}

TEST_CASE("independence examples") {
    const FiniteAlgebra a = z2_xor();
    TermStore store(a.signature());
    CHECK(is_independent(a, store, {}, 2).independent);
    CHECK(is_independent(a, store, parse_all(store, 2, {"mul(x1,x2) ~ e"}), 2).independent);
    const auto r = is_independent(a, store, parse_all(store, 2, {"x1 ~ x1"}), 2);
    CHECK_FALSE(r.independent);
    REQUIRE(r.violating);
    CHECK(*r.violating == std::vector<std::size_t>{0});

    Budget tight;
    tight.max_subset_equations = 2;
    const auto three = parse_all(store, 2, {"x1 ~ e", "x2 ~ e", "mul(x1,x2) ~ e"});
    CHECK_THROWS_AS(is_independent(a, store, three, 2, tight), BudgetError);
    const auto sampled = is_independent(a, store, three, 2, tight, 7, 50);
    CHECK_FALSE(sampled.exhaustive);
}

TEST_CASE("independent_subsystem examples") {
    const FiniteAlgebra a = z2_xor();
    TermStore store(a.signature());
    CHECK(independent_subsystem(a, store, parse_all(store, 2, {"x1 ~ x1", "mul(x2,x2) ~ e"}), 2).kept.empty());
    const auto sub = independent_subsystem(a, store, parse_all(store, 2, {"mul(x1,x2) ~ e", "mul(x2,x1) ~ e"}), 2);
    CHECK(sub.kept == std::vector<std::size_t>{0});
    CHECK(sub.equivalent);
    const auto same = independent_subsystem(a, store, parse_all(store, 2, {"x1 ~ e", "x2 ~ e"}), 2);
    CHECK(same.kept == std::vector<std::size_t>{0, 1});
}

TEST_CASE("radical basis and identity base examples") {
    {
        const FiniteAlgebra a = z2_xor();
        const auto f = TermFunctionAlgebra::build(a, store_for(a), 1);
        CHECK(radical_basis(f, PointSet::empty(2, 1)).points.is_empty());
        PointSet one(2, 1);
        one.insert(0);
        CHECK(radical_basis(f, one).points.is_empty());  // x and 0 agree at 0, so Rad({0}) = Rad(empty)
        PointSet other(2, 1);
        other.insert(1);
        CHECK(radical_basis(f, other).points == other);
        const auto b = radical_basis(f, PointSet::full(2, 1));
        CHECK(b.points == other);
        CHECK(b.minimal);
        CHECK(identity_base(f).points == other);
    }
    {
        const FiniteAlgebra t = trivial_algebra(z2_xor().signature(), "t");
        CHECK(identity_base(TermFunctionAlgebra::build(t, store_for(t), 2)).points.is_empty());
    }
    {
        const FiniteAlgebra a = left_zero();
        const auto b = identity_base(TermFunctionAlgebra::build(a, store_for(a), 2)).points;
        CHECK(b.count() == 1);
        const auto p = decode_point(b.members()[0], 2, 2);
        CHECK(p[0] != p[1]);
    }
}

TEST_CASE("witness examples") {
    const FiniteAlgebra a = z2_xor();
    TermStore store(a.signature());
    {
        System s{parse_all(store, 2, {"x1 ~ e"}), {}};
        const auto w = q_omega_witness(a, store, s, parse_equation("mul(x1,x1) ~ e", store, 1), 2);
        CHECK(w.indices.empty());
    }
    {
        System s{parse_all(store, 2, {"mul(x1,x2) ~ e"}), {}};
        const auto w = q_omega_witness(a, store, s, parse_equation("mul(x2,x1) ~ e", store, 2), 2);
        CHECK(w.indices == std::vector<std::size_t>{0});
        CHECK(w.minimum);
    }
    {
        System s{parse_all(store, 2, {"x1 ~ e", "x2 ~ e"}), {}};
        const auto eqs = parse_all(store, 2, {"mul(x1,x2) ~ e"});
        const auto w = u_omega_witness(a, store, s, eqs, 2);
        CHECK(w.indices == std::vector<std::size_t>{0, 1});
        System diag{parse_all(store, 2, {"x1 ~ x2"}), {}};
        CHECK_THROWS_AS(q_omega_witness(a, store, diag, parse_equation("x1 ~ e", store, 1), 2), Error);
        const auto id = parse_all(store, 2, {"mul(x1,x2) ~ e", "x1 ~ x1"});
        CHECK(u_omega_witness(a, store, s, id, 2).indices.empty());
    }
}

TEST_CASE("stability examples") {
    const FiniteAlgebra a = z2_xor();
    TermStore store(a.signature());
    CHECK(is_stable(a, store, parse_all(store, 2, {"x1 ~ x1", "mul(x1,x1) ~ e"}), 2, 1).stable);
    CHECK(is_stable(a, store, parse_all(store, 2, {"mul(x1,x2) ~ e"}), 2, 1).stable);
    CHECK(is_stable(a, store, parse_all(store, 2, {"mul(x1,x2) ~ e", "mul(x2,x1) ~ e"}), 2, 1).stable);
    const auto s = parse_all(store, 1, {"x1 ~ e", "mul(x1,x1) ~ e"});
    const auto r = is_stable(a, store, s, 1, 1);
    CHECK_FALSE(r.stable);
    REQUIRE(r.witness);
    CHECK(*r.witness == std::vector<std::size_t>{0});
    const auto split = stable_split(a, store, s, 1);
    CHECK(split.removed == std::vector<std::size_t>{0});
    CHECK(split.verified);
    CHECK(stable_split(a, store, parse_all(store, 1, {"mul(x1,x1) ~ e"}), 1).removed.empty());
    CHECK(stable_split(a, store, parse_all(store, 1, {"x1 ~ e"}), 1).removed.empty());
}

TEST_CASE("chain report examples") {
    auto report = [](const FiniteAlgebra& a, unsigned n) {
        const auto f = TermFunctionAlgebra::build(a, store_for(a), n);
        return chain_report(ZariskiLattice::build(f));
    };
    const auto t = report(trivial_algebra(z2_xor().signature(), "t"), 2);
    CHECK(t.lattice_size == 1);
    CHECK(t.set_chain == 1);
    const auto z = report(z2_xor(), 1);
    CHECK(z.lattice_size == 2);
    CHECK(z.set_chain == 2);
    CHECK(z.equal());
    const auto l = report(left_zero(), 2);
    CHECK(l.lattice_size == 2);
    CHECK(l.set_chain == 2);
    CHECK(l.radical_chain == 2);
}

TEST_CASE("axiomatize examples") {
    const FiniteAlgebra a = z2_xor();
    auto store = store_for(a);
    const auto subs = subalgebras(a);
    const auto sigma = parse_all(*store, 1, {"mul(x1,x1) ~ e", "mul(mul(x1,x1),mul(x1,x1)) ~ e"});
    // both are identities of A, so every element of F(1) solves them
    const auto r = axiomatize_finite(a, store, sigma, 1, subs);
    CHECK(r.kept.empty());
    CHECK(r.reduction_verified);
    CHECK(r.mismatches.empty());
    const auto strict = parse_all(*store, 1, {"x1 ~ e", "mul(x1,x1) ~ x1"});
    const auto r2 = axiomatize_finite(a, store, strict, 1, subs);
    CHECK(r2.kept == std::vector<std::size_t>{0});
    CHECK(r2.mismatches.empty());
    CHECK(axiomatize_finite(a, store, {}, 1, subs).kept.empty());
    CHECK(axiomatize_finite(a, store, parse_all(*store, 1, {"x1 ~ x1"}), 1, subs).kept.empty());
}

TEST_CASE("property: condition checks agree with subset enumeration") {
    std::mt19937_64 rng(61);
    std::vector<FiniteAlgebra> algebras{z2_xor(), left_zero(), meet_semilattice()};
    for (int i = 0; i < 4; ++i) algebras.push_back(random_algebra(2 + i % 2, rng));
    for (const auto& a : algebras)
        for (int trial = 0; trial < 6; ++trial) {
            TermStore store(a.signature());
            const unsigned n = 2;
            const auto eqs = random_system(store, n, 2, 1 + rng() % 7, rng);
            const std::uint32_t all = (1u << eqs.size()) - 1;
            const auto v = naive_solve(a, store, eqs, all, n);

            const auto c = reduce_system(a, store, eqs, n);
            CHECK(c.verified);
            CHECK(naive_solve(a, store, eqs, mask_of(c.kept), n) == v);
            CHECK(c.kept.size() <= v.size());

            CHECK(is_independent(a, store, eqs, n).independent == brute_independent(a, store, eqs, n));
            const auto sub = independent_subsystem(a, store, eqs, n);
            CHECK(sub.equivalent);
            CHECK(std::is_sorted(sub.kept.begin(), sub.kept.end()));
            std::vector<Equation> kept;
            for (auto i : sub.kept) kept.push_back(eqs[i]);
            CHECK(brute_independent(a, store, kept, n));
            CHECK(naive_solve(a, store, kept, (1u << kept.size()) - 1, n) == v);

            for (std::size_t k = 0; k < eqs.size(); ++k)
                CHECK(is_stable(a, store, eqs, n, k).stable == brute_stable(a, store, eqs, n, k));

            const auto split = stable_split(a, store, eqs, n);
            CHECK(split.verified);
            std::size_t best = eqs.size();
            for (std::uint32_t removed = 0; removed <= all; ++removed) {
                std::vector<Equation> rest;
                for (std::size_t i = 0; i < eqs.size(); ++i)
                    if (!(removed >> i & 1)) rest.push_back(eqs[i]);
                if (rest.empty() || brute_stable(a, store, rest, n, rest.size()))
                    best = std::min<std::size_t>(best, __builtin_popcount(removed));
            }
            CHECK(split.removed.size() == best);

            // q-omega against an equation that holds on V(eqs)
            const Equation target = eqs[rng() % eqs.size()];
            const auto tv = naive_solve(a, store, {target}, 1, n);
            const auto w = q_omega_witness(a, store, System{eqs, {}}, target, n);
            CHECK(included(naive_solve(a, store, eqs, mask_of(w.indices), n), tv));
            CHECK(w.minimum);
            CHECK(w.indices.size() == brute_min_witness(a, store, eqs, tv, n));
        }
}

TEST_CASE("property: radical bases are minimal and preserve the radical") {
    std::mt19937_64 rng(67);
    for (const auto& a : small_algebras()) {
        if (a.size() > 2) continue;
        const unsigned n = 2;
        const auto f = TermFunctionAlgebra::build(a, store_for(a), n);
        const auto clone = naive_clone(a, n);
        const std::vector<std::vector<Element>> fs(clone.begin(), clone.end());
        // Partition of the clone by agreement on a set of points.
        auto partition = [&](const std::vector<std::size_t>& pts) {
            std::map<std::vector<Element>, std::vector<std::size_t>> classes;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                std::vector<Element> key;
                for (auto p : pts) key.push_back(fs[i][p]);
                classes[key].push_back(i);
            }
            std::set<std::vector<std::size_t>> out;
            for (auto& [k, c] : classes) out.insert(c);
            return out;
        };
        for (int trial = 0; trial < 10; ++trial) {
            PointSet e(a.size(), n);
            for (std::size_t p = 0; p < e.universe(); ++p)
                if (rng() % 2) e.insert(p);
            const auto b = radical_basis(f, e);
            CHECK(b.minimal);
            CHECK(b.points.subset_of(e));
            const auto members = b.points.members();
            CHECK(partition(members) == partition(e.members()));
            for (std::size_t drop = 0; drop < members.size(); ++drop) {
                auto fewer = members;
                fewer.erase(fewer.begin() + drop);
                CHECK(partition(fewer) != partition(e.members()));
            }
        }
        const auto base = identity_base(f).points.members();
        CHECK(partition(base).size() == fs.size());
    }
}

TEST_CASE("property: chain lengths match a brute-force poset walk") {
    for (const auto& a : small_algebras())
        for (unsigned n = 1; n <= 2; ++n) {
            if (a.size() == 3 && n == 2) continue;
            const auto f = TermFunctionAlgebra::build(a, store_for(a), n);
            const auto l = ZariskiLattice::build(f);
            const auto rep = chain_report(l);
            CHECK(rep.lattice_size == l.size());
            const std::size_t sets = longest_chain(l.size(), [&](std::size_t i, std::size_t j) {
                return l.member(i) != l.member(j) && l.member(j).subset_of(l.member(i));
            });
            std::vector<RadicalIdeal> rads;
            for (const auto& m : l.members()) rads.push_back(radical_of_set(f, m));
            const std::size_t radicals = longest_chain(l.size(), [&](std::size_t i, std::size_t j) {
                return !(rads[i] == rads[j]) && rads[i].subset_of(rads[j]);
            });
            CHECK(rep.set_chain == sets);
            CHECK(rep.radical_chain == radicals);
            CHECK(rep.equal());
        }
}
