#include "ualgeo/suites.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <random>
#include <unordered_set>

#include "ualgeo/catalog.hpp"
#include "ualgeo/conditions.hpp"
#include "ualgeo/error.hpp"
#include "ualgeo/logic.hpp"

namespace ualgeo {

namespace {

// Exhaustive subset loops run over A^n only up to this many points.
constexpr std::size_t kSubsetPoints = 12;
constexpr std::uint32_t kNone = 0xffffffffu;

std::string arity_range(unsigned n) { return "n=" + std::to_string(n); }

// Runs body; a budget error marks the property SKIPPED.
PropertyResult run_property(std::string name, std::string range,
                            const std::function<std::string(std::string& range)>& body) {
    PropertyResult r{std::move(name), std::move(range), Verdict::Pass, {}};
    try {
        r.detail = body(r.range);
        if (!r.detail.empty()) r.verdict = Verdict::Fail;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Budget) throw;
        r.verdict = Verdict::Skipped;
        r.detail = e.what();
    }
    return r;
}

PropertyResult skipped(std::string name, std::string range, std::string why) {
    return {std::move(name), std::move(range), Verdict::Skipped, std::move(why)};
}

unsigned default_geometry_arity(unsigned m) {
    if (m <= 1) return 3;
    unsigned n = 0;
    std::size_t p = 1;
    while (p * m <= 9) {
        p *= m;
        ++n;
    }
    return std::max(n, 1u);
}

// Subsets of A^n by bit pattern over the point order.
PointSet subset_from_mask(unsigned m, unsigned n, std::uint64_t mask) {
    PointSet s(m, n);
    for (std::size_t p = 0; mask; ++p, mask >>= 1)
        if (mask & 1) s.insert(p);
    return s;
}

// Intersection of the lattice members containing y (the lattice is closed
// under intersection, so this is the smallest one).
PointSet smallest_member_over(const ZariskiLattice& lattice, const PointSet& y) {
    PointSet out = PointSet::full(y.carrier(), y.arity());
    for (const auto& member : lattice.members())
        if (y.subset_of(member)) out &= member;
    return out;
}

// Irreducible members found directly: a member is reducible iff it is the
// union of the members strictly inside it. The empty set counts as
// reducible.
std::vector<bool> irreducible_members(const ZariskiLattice& lattice) {
    std::vector<bool> out(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        const PointSet& z = lattice.member(i);
        if (z.is_empty()) continue;
        PointSet below(z.carrier(), z.arity());
        for (const auto& w : lattice.members())
            if (w != z && w.subset_of(z)) below |= w;
        out[i] = below != z;
    }
    return out;
}

std::vector<PointSet> closed_sets(const ZariskiLattice& lattice) {
    std::unordered_set<PointSet> seen;
    std::vector<PointSet> out;
    const auto& first = lattice.member(0);
    const PointSet empty(first.carrier(), first.arity());
    seen.insert(empty);
    out.push_back(empty);
    for (std::size_t k = 0; k < out.size(); ++k)
        for (const auto& m : lattice.members()) {
            PointSet u = out[k] | m;
            if (seen.insert(u).second) out.push_back(std::move(u));
        }
    std::sort(out.begin(), out.end(), size_lex_less);
    return out;
}

// Components of z: the maximal irreducible members inside it.
std::vector<PointSet> brute_components(const ZariskiLattice& lattice, const std::vector<bool>& irreducible,
                                       const PointSet& z) {
    std::vector<PointSet> inside;
    for (std::size_t i = 0; i < lattice.size(); ++i)
        if (irreducible[i] && lattice.member(i).subset_of(z)) inside.push_back(lattice.member(i));
    std::vector<PointSet> out;
    for (const auto& c : inside) {
        bool maximal = true;
        for (const auto& d : inside)
            if (d != c && c.subset_of(d)) maximal = false;
        if (maximal) out.push_back(c);
    }
    std::sort(out.begin(), out.end(), size_lex_less);
    return out;
}

std::string tuple_text(const PointSet& s) { return format_tuples(s); }

void geometry_suite(const FiniteAlgebra& a, const SuiteOptions& o, std::vector<PropertyResult>& out) {
    const unsigned top = o.n.value_or(default_geometry_arity(a.size()));
    for (unsigned n = 1; n <= top; ++n) {
        const std::string range = arity_range(n);
        const std::size_t points = point_count(a.size(), n, o.budget.max_points);
        if (points > kSubsetPoints) {
            for (const char* name : {"closure-law", "coordinate-iso", "decomposition", "radical-basis", "chains"})
                out.push_back(skipped(name, range, std::to_string(points) + " points exceed the subset limit of " +
                                                       std::to_string(kSubsetPoints)));
            continue;
        }
        std::shared_ptr<TermFunctionAlgebra> f;
        std::shared_ptr<ZariskiLattice> lattice;
        try {
            auto store = std::make_shared<TermStore>(a.signature());
            f = std::make_shared<TermFunctionAlgebra>(TermFunctionAlgebra::build(a, store, n, o.budget));
            lattice = std::make_shared<ZariskiLattice>(ZariskiLattice::build(*f, o.budget));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Budget) throw;
            for (const char* name : {"closure-law", "coordinate-iso", "decomposition", "radical-basis", "chains"})
                out.push_back(skipped(name, range, e.what()));
            continue;
        }
        const std::uint64_t subsets = std::uint64_t{1} << points;
        const std::string all = range + ", all " + std::to_string(subsets) + " subsets";

        out.push_back(run_property("closure-law", all, [&](std::string&) -> std::string {
            for (std::uint64_t mask = 0; mask < subsets; ++mask) {
                const PointSet y = subset_from_mask(a.size(), n, mask);
                const PointSet got = algebraic_closure(*f, y);
                const PointSet want = smallest_member_over(*lattice, y);
                if (got != want) return "Y=" + tuple_text(y) + ": closure " + tuple_text(got) + ", expected " +
                                        tuple_text(want);
            }
            return {};
        }));

        out.push_back(run_property("coordinate-iso", all, [&](std::string&) -> std::string {
            for (std::uint64_t mask = 0; mask < subsets; ++mask) {
                const PointSet y = subset_from_mask(a.size(), n, mask);
                const auto coord = coordinate_algebra(*f, y);
                const auto report = check_coordinate_isomorphism(*f, radical_of_set(*f, y), coord);
                if (!report.ok()) return "Y=" + tuple_text(y) + ": " + report.failure;
            }
            return {};
        }));

        out.push_back(run_property("decomposition", range, [&](std::string& r) -> std::string {
            const auto irreducible = irreducible_members(*lattice);
            const auto sets = closed_sets(*lattice);
            r = range + ", all " + std::to_string(sets.size()) + " closed sets";
            for (const auto& z : sets) {
                if (z.is_empty()) continue;
                const auto got = irreducible_decomposition(*lattice, z);
                const auto want = brute_components(*lattice, irreducible, z);
                if (got != want) return "Z=" + tuple_text(z) + ": got " + std::to_string(got.size()) +
                                        " components, expected " + std::to_string(want.size());
            }
            return {};
        }));

        out.push_back(run_property("radical-basis", all, [&](std::string&) -> std::string {
            for (std::uint64_t mask = 0; mask < subsets; ++mask) {
                const PointSet e = subset_from_mask(a.size(), n, mask);
                const auto basis = radical_basis(*f, e);
                if (!basis.points.subset_of(e)) return "E=" + tuple_text(e) + ": basis leaves E";
                const RadicalIdeal want = radical_of_set(*f, e);
                if (!(radical_of_set(*f, basis.points) == want))
                    return "E=" + tuple_text(e) + ": Rad(E0) differs from Rad(E)";
                for (std::size_t p : basis.points.members()) {
                    PointSet smaller = basis.points;
                    smaller.erase(p);
                    if (radical_of_set(*f, smaller) == want)
                        return "E=" + tuple_text(e) + ": basis point " + std::to_string(p) + " is redundant";
                }
            }
            return {};
        }));

        out.push_back(run_property("chains", range, [&](std::string& r) -> std::string {
            const auto report = chain_report(*lattice, o.budget);
            r = range + ", lattice of " + std::to_string(report.lattice_size);
            if (!report.equal())
                return "set chain " + std::to_string(report.set_chain) + " vs radical chain " +
                       std::to_string(report.radical_chain);
            return {};
        }));
    }
}

void lemma1_suite(const FiniteAlgebra& a, const SuiteOptions& o, std::vector<PropertyResult>& out) {
    const unsigned top = o.n.value_or(2), d = o.depth.value_or(2);
    for (unsigned n = 1; n <= top; ++n) {
        out.push_back(run_property("lemma1", arity_range(n) + " d<=" + std::to_string(d),
                                   [&](std::string& r) -> std::string {
                                       auto store = std::make_shared<TermStore>(a.signature());
                                       const auto rep = verify_lemma1(a, store, n, d, o.budget);
                                       r += ", " + std::to_string(rep.pairs) + " pairs";
                                       if (rep.ok()) return {};
                                       return store->print(rep.first_mismatch->lhs) + " ~ " +
                                              store->print(rep.first_mismatch->rhs);
                                   }));
    }
}

void corollary1_suite(const FiniteAlgebra& a, const SuiteOptions& o, std::vector<PropertyResult>& out) {
    const unsigned top = o.n.value_or(2), d = o.depth.value_or(2);
    for (unsigned ne = 1; ne <= top; ++ne)
        for (unsigned nf = 1; nf <= top; ++nf) {
            const std::string range =
                "n_eq=" + std::to_string(ne) + " n_free=" + std::to_string(nf) + " d<=" + std::to_string(d);
            auto store = std::make_shared<TermStore>(a.signature());
            std::optional<Corollary1Report> rep;
            PropertyResult r = run_property("corollary1", range, [&](std::string& rr) -> std::string {
                rep = verify_corollary1(a, store, ne, nf, d, o.budget);
                rr += ", " + std::to_string(rep->tuples) + " tuples x " + std::to_string(rep->equations) +
                      " equations";
                return rep->violations ? rep->first_violation : std::string{};
            });
            if (rep && rep->skipped) {
                r.verdict = Verdict::Skipped;
                r.detail = "tuple budget exceeded";
            }
            out.push_back(std::move(r));
        }
}

void deduction_suite(const FiniteAlgebra& a, const SuiteOptions& o, std::vector<PropertyResult>& out) {
    const unsigned n = o.n.value_or(2), d = o.depth.value_or(3);
    const std::string range = arity_range(n) + " d=" + std::to_string(d);
    out.push_back(run_property("deduction-soundness", range, [&](std::string& r) -> std::string {
        auto store = std::make_shared<TermStore>(a.signature());
        const auto ids = IdentitySet::build(a, store, n, o.budget);
        const auto seeds = TermUniverse::build(*store, n, d > 0 ? d - 1 : 0, o.budget);
        // The first identities among shallower terms, each against the
        // earliest term it collapses with.
        std::vector<Equation> sigma;
        std::vector<std::uint32_t> first_of_class(ids.free_algebra().size(), kNone);
        for (std::uint32_t i = 0; i < seeds.size() && sigma.size() < 5; ++i) {
            const auto c = ids.class_of(seeds.term(i));
            if (first_of_class[c] == kNone)
                first_of_class[c] = i;
            else
                sigma.push_back({seeds.term(first_of_class[c]), seeds.term(i)});
        }
        auto universe = std::make_shared<const TermUniverse>(TermUniverse::build(*store, n, d, o.budget));
        const auto closure = deductive_closure(sigma, universe);
        Tabulator tab(a, *store, n);
        std::size_t pairs = 0;
        for (const auto& cls : closure.congruence->nontrivial_classes()) {
            const auto& rep = tab.values(universe->term(cls.front()));
            for (std::size_t k = 1; k < cls.size(); ++k) {
                ++pairs;
                if (tab.values(universe->term(cls[k])) != rep)
                    return store->print(universe->term(cls.front())) + " ~ " +
                           store->print(universe->term(cls[k])) + " is not an identity";
            }
        }
        r += ", " + std::to_string(sigma.size()) + " axioms, " + std::to_string(universe->size()) + " terms, " +
             std::to_string(pairs) + " derived links";
        return {};
    }));
}

void conditions_suite(const FiniteAlgebra& a, const SuiteOptions& o, std::vector<PropertyResult>& out) {
    const unsigned top = o.n.value_or(2), d = o.depth.value_or(3);
    for (unsigned n = 1; n <= top; ++n) {
        const std::string range = arity_range(n) + " d<=" + std::to_string(d) + ", " +
                                  std::to_string(o.instances) + " systems, seed " + std::to_string(o.seed);
        auto store = std::make_shared<TermStore>(a.signature());
        std::mt19937_64 rng(o.seed + n);
        std::vector<std::vector<Equation>> systems;
        for (std::size_t k = 0; k < o.instances; ++k) systems.push_back(random_system(*store, n, d, 1 + rng() % 60, rng));
        const std::size_t points = point_count(a.size(), n, o.budget.max_points);

        out.push_back(run_property("noetherian", range, [&](std::string&) -> std::string {
            for (std::size_t k = 0; k < systems.size(); ++k) {
                const auto cert = reduce_system(a, *store, systems[k], n);
                if (!cert.verified || cert.kept.size() > points)
                    return "system " + std::to_string(k) + ": " + std::to_string(cert.kept.size()) + " kept" +
                           (cert.verified ? "" : ", certificate not verified");
            }
            return {};
        }));

        out.push_back(run_property("independent-subsystem", range, [&](std::string&) -> std::string {
            for (std::size_t k = 0; k < systems.size(); ++k) {
                const std::span<const Equation> s(systems[k].data(), std::min<std::size_t>(systems[k].size(), 15));
                const auto sub = independent_subsystem(a, *store, s, n, o.budget);
                if (!sub.equivalent) return "system " + std::to_string(k) + ": not equivalent";
                if (!sub.independence.independent || !sub.independence.exhaustive)
                    return "system " + std::to_string(k) + ": not independent";
            }
            return {};
        }));

        out.push_back(run_property("q-omega", range, [&](std::string&) -> std::string {
            for (std::size_t k = 0; k < systems.size(); ++k) {
                System s{systems[k], {}};
                const Equation eq = random_system(*store, n, d, 1, rng).front();
                if (!solve(a, *store, s.equations, n).subset_of(solve(a, *store, std::span(&eq, 1), n)))
                    s.equations.insert(s.equations.begin() + static_cast<std::ptrdiff_t>(rng() % (s.equations.size() + 1)), eq);
                const auto w = q_omega_witness(a, *store, s, eq, n, o.budget);
                std::vector<Equation> chosen;
                for (auto i : w.indices) chosen.push_back(s.equations[i]);
                if (!solve(a, *store, chosen, n).subset_of(solve(a, *store, std::span(&eq, 1), n)))
                    return "system " + std::to_string(k) + ": witness does not imply the equation";
            }
            return {};
        }));
    }
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"geometry", "lemma1", "corollary1", "deduction", "conditions"};
    return names;
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Skipped: return "SKIPPED";
    }
    return "?";
}

std::vector<PropertyResult> run_suite(const FiniteAlgebra& a, std::string_view suite, const SuiteOptions& options) {
    std::vector<PropertyResult> out;
    if (suite == "geometry")
        geometry_suite(a, options, out);
    else if (suite == "lemma1")
        lemma1_suite(a, options, out);
    else if (suite == "corollary1")
        corollary1_suite(a, options, out);
    else if (suite == "deduction")
        deduction_suite(a, options, out);
    else if (suite == "conditions")
        conditions_suite(a, options, out);
    else
        throw Error(ErrorKind::Semantic, "unknown suite '" + std::string(suite) + "'");
    return out;
}

}  // namespace ualgeo
