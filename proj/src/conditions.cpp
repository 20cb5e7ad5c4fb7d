#include "ualgeo/conditions.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "ualgeo/error.hpp"

namespace ualgeo {

namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

PointSet intersect(const std::vector<PointSet>& sets, std::span<const std::size_t> indices, unsigned m, unsigned n) {
    PointSet out = PointSet::full(m, n);
    for (auto i : indices) out &= sets[i];
    return out;
}

std::vector<Equation> pick(std::span<const Equation> eqs, std::span<const std::size_t> indices) {
    std::vector<Equation> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(eqs[i]);
    return out;
}

// Calls fn on each r-subset of {0..k-1} in lexicographic order until it
// returns true. Returns whether it did.
template <class Fn>
bool for_each_combination(std::size_t k, std::size_t r, Fn&& fn) {
    if (r > k) return false;
    std::vector<std::size_t> c(r);
    for (std::size_t i = 0; i < r; ++i) c[i] = i;
    while (true) {
        if (fn(std::span<const std::size_t>(c))) return true;
        std::size_t i = r;
        while (i > 0 && c[i - 1] == k - r + i - 1) --i;
        if (i == 0) return false;
        ++c[i - 1];
        for (std::size_t j = i; j < r; ++j) c[j] = c[j - 1] + 1;
    }
}

std::vector<std::size_t> complement_indices(std::size_t k, std::span<const std::size_t> removed) {
    std::vector<std::size_t> rest;
    std::size_t j = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (j < removed.size() && removed[j] == i) {
            ++j;
            continue;
        }
        rest.push_back(i);
    }
    return rest;
}

}  // namespace

std::vector<Equation> consumed_equations(const System& s) {
    return s.is_family() ? s.one_period() : s.equations;
}

std::vector<Equation> ReductionCertificate::subsystem() const { return pick(original, kept); }

ReductionCertificate reduce_system(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> eqs,
                                   unsigned n) {
    ReductionCertificate cert;
    cert.original.assign(eqs.begin(), eqs.end());
    const auto sets = solve_each(a, store, eqs, n);
    PointSet current = PointSet::full(a.size(), n);
    std::size_t size = current.count();
    for (std::size_t i = 0; i < sets.size(); ++i) {
        PointSet next = current & sets[i];
        const std::size_t c = next.count();
        if (c < size) {
            cert.kept.push_back(i);
            current = std::move(next);
            size = c;
        }
    }
    cert.solution = current;
    cert.verified = solve(a, store, cert.subsystem(), n) == solve(a, store, eqs, n);
    return cert;
}

ReductionCertificate reduce_system(const FiniteAlgebra& a, const TermStore& store, const System& s, unsigned n) {
    return reduce_system(a, store, consumed_equations(s), n);
}

IndependenceReport is_independent(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> eqs,
                                  unsigned n, const Budget& budget, std::optional<std::uint64_t> sample_seed,
                                  std::uint64_t samples) {
    IndependenceReport rep;
    const std::size_t k = eqs.size();
    if (k == 0) return rep;
    const auto sets = solve_each(a, store, eqs, n);
    const std::size_t words = sets.front().words().size();
    const bool fits = k <= budget.max_subset_equations && k < 40 && (std::uint64_t{1} << k) * words <= (1u << 26);

    if (fits) {
        // V of every subset, indexed by bit mask.
        const std::size_t total = std::size_t{1} << k;
        std::vector<std::uint64_t> v(total * words);
        const PointSet full = PointSet::full(a.size(), n);
        std::copy(full.words().begin(), full.words().end(), v.begin());
        for (std::size_t mask = 1; mask < total; ++mask) {
            const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
            const std::uint64_t* prev = &v[(mask & (mask - 1)) * words];
            const std::uint64_t* e = sets[low].words().data();
            std::uint64_t* out = &v[mask * words];
            for (std::size_t w = 0; w < words; ++w) out[w] = prev[w] & e[w];
        }
        for (std::size_t mask = 1; mask < total; ++mask) {
            ++rep.subsets_checked;
            const std::uint64_t* here = &v[mask * words];
            bool some_needed = false;
            for (std::size_t rest = mask; rest && !some_needed; rest &= rest - 1) {
                const std::size_t bit = rest & (~rest + 1);
                const std::uint64_t* without = &v[(mask ^ bit) * words];
                some_needed = !std::equal(here, here + words, without);
            }
            if (!some_needed) {
                rep.independent = false;
                std::vector<std::size_t> members;
                for (std::size_t i = 0; i < k; ++i)
                    if (mask >> i & 1) members.push_back(i);
                rep.violating = std::move(members);
                return rep;
            }
        }
        return rep;
    }

    if (!sample_seed)
        throw BudgetError("independence check over " + std::to_string(k) + " equations exceeds the subset budget of " +
                              std::to_string(budget.max_subset_equations),
                          k);
    rep.exhaustive = false;
    std::mt19937_64 rng(*sample_seed);
    std::vector<std::size_t> members;
    for (std::uint64_t s = 0; s < samples; ++s) {
        members.clear();
        for (std::size_t i = 0; i < k; ++i)
            if (rng() & 1) members.push_back(i);
        if (members.empty()) continue;
        ++rep.subsets_checked;
        const PointSet here = intersect(sets, members, a.size(), n);
        bool some_needed = false;
        for (std::size_t j = 0; j < members.size() && !some_needed; ++j) {
            std::vector<std::size_t> rest = members;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
            some_needed = intersect(sets, rest, a.size(), n) != here;
        }
        if (!some_needed) {
            rep.independent = false;
            rep.violating = members;
            return rep;
        }
    }
    return rep;
}

IndependentSubsystem independent_subsystem(const FiniteAlgebra& a, const TermStore& store,
                                           std::span<const Equation> eqs, unsigned n, const Budget& budget) {
    IndependentSubsystem out;
    const auto sets = solve_each(a, store, eqs, n);
    std::vector<std::size_t> kept = reduce_system(a, store, eqs, n).kept;
    const PointSet target = intersect(sets, kept, a.size(), n);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            std::vector<std::size_t> rest = kept;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
            if (intersect(sets, rest, a.size(), n) == target) {
                kept = std::move(rest);
                changed = true;
                break;
            }
        }
    }
    out.kept = kept;
    const auto sub = pick(eqs, kept);
    out.equivalent = solve(a, store, sub, n) == solve(a, store, eqs, n);
    out.independence = is_independent(a, store, sub, n, budget, std::uint64_t{1});
    return out;
}

namespace {

// Classes of the radical of a point set given as a list, by successive
// refinement. class_of is renumbered by first member.
std::size_t refine(const TermFunctionAlgebra& f, std::vector<std::uint32_t>& class_of, std::size_t classes,
                   std::size_t point, std::vector<std::uint32_t>& scratch) {
    const unsigned m = f.base().size();
    scratch.assign(classes * m, kNone);
    std::uint32_t next = 0;
    for (std::size_t e = 0; e < class_of.size(); ++e) {
        std::uint32_t& slot = scratch[class_of[e] * m + f.values(e)[point]];
        if (slot == kNone) slot = next++;
        class_of[e] = slot;
    }
    return next;
}

std::size_t radical_classes(const TermFunctionAlgebra& f, std::span<const std::size_t> points) {
    std::vector<std::uint32_t> class_of(f.size(), 0), scratch;
    std::size_t classes = f.size() ? 1 : 0;
    for (auto p : points) classes = refine(f, class_of, classes, p, scratch);
    return classes;
}

}  // namespace

RadicalBasis radical_basis(const TermFunctionAlgebra& f, const PointSet& e) {
    if (!f.on_full_space())
        throw Error(ErrorKind::Precondition, "radical basis needs the free algebra on the whole space");
    RadicalBasis out;
    out.points = PointSet(e.carrier(), e.arity());
    const auto members = e.members();
    const std::size_t target = radical_of_set(f, e).classes();

    std::vector<std::uint32_t> class_of(f.size(), 0), trial, scratch;
    std::size_t classes = f.size() ? 1 : 0;
    std::vector<std::size_t> chosen;
    while (classes < target) {
        bool grew = false;
        for (auto p : members) {
            if (out.points.contains(p)) continue;
            trial = class_of;
            const std::size_t c = refine(f, trial, classes, p, scratch);
            if (c > classes) {
                class_of = std::move(trial);
                classes = c;
                out.points.insert(p);
                chosen.push_back(p);
                grew = true;
                break;
            }
        }
        if (!grew) throw Error(ErrorKind::Semantic, "internal: radical basis loop stalled");
    }

    // Single-removal minimality, pruning while some point is redundant.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t j = 0; j < chosen.size(); ++j) {
            std::vector<std::size_t> rest = chosen;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
            if (radical_classes(f, rest) == target) {
                out.points.erase(chosen[j]);
                chosen = std::move(rest);
                ++out.pruned;
                changed = true;
                break;
            }
        }
    }
    out.minimal = true;
    return out;
}

RadicalBasis identity_base(const TermFunctionAlgebra& f) {
    return radical_basis(f, PointSet::full(f.base().size(), f.arity()));
}

namespace {

Witness cover_witness(const FiniteAlgebra& a, const TermStore& store, const System& s, const PointSet& target,
                      unsigned n, const Budget& budget) {
    const auto eqs = consumed_equations(s);
    const auto sets = solve_each(a, store, eqs, n);
    std::vector<std::size_t> all(eqs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (!intersect(sets, all, a.size(), n).subset_of(target))
        throw Error(ErrorKind::Precondition, "the system's solution set is not contained in the target set");

    const PointSet outside = target.complement();
    // excluded[i]: points outside the target that equation i rules out.
    std::vector<PointSet> excluded;
    for (const auto& v : sets) {
        PointSet x = outside;
        x.subtract(v);
        excluded.push_back(std::move(x));
    }

    Witness w;
    PointSet uncovered = outside;
    while (!uncovered.is_empty()) {
        std::size_t best = 0, best_gain = 0;
        for (std::size_t i = 0; i < excluded.size(); ++i) {
            const std::size_t gain = (excluded[i] & uncovered).count();
            if (gain > best_gain) {
                best = i;
                best_gain = gain;
            }
        }
        w.indices.push_back(best);
        uncovered.subtract(excluded[best]);
    }
    std::sort(w.indices.begin(), w.indices.end());

    if (eqs.size() <= budget.max_subset_equations) {
        w.minimum = true;
        for (std::size_t r = 0; r < w.indices.size(); ++r) {
            std::vector<std::size_t> found;
            const bool hit = for_each_combination(eqs.size(), r, [&](std::span<const std::size_t> c) {
                PointSet left = outside;
                for (auto i : c) left.subtract(excluded[i]);
                if (!left.is_empty()) return false;
                found.assign(c.begin(), c.end());
                return true;
            });
            if (hit) {
                w.indices = std::move(found);
                break;
            }
        }
    }
    w.solution = solve(a, store, pick(eqs, w.indices), n);
    if (!w.solution.subset_of(target)) throw Error(ErrorKind::Semantic, "internal: witness failed re-verification");
    return w;
}

}  // namespace

Witness q_omega_witness(const FiniteAlgebra& a, const TermStore& store, const System& s, const Equation& eq,
                        unsigned n, const Budget& budget) {
    return cover_witness(a, store, s, solve(a, store, std::span<const Equation>(&eq, 1), n), n, budget);
}

Witness u_omega_witness(const FiniteAlgebra& a, const TermStore& store, const System& s,
                        std::span<const Equation> eqs, unsigned n, const Budget& budget) {
    PointSet target(a.size(), n);
    for (const auto& v : solve_each(a, store, eqs, n)) target |= v;
    return cover_witness(a, store, s, target, n, budget);
}

StabilityReport is_stable(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> eqs, unsigned n,
                          std::size_t k) {
    StabilityReport rep;
    const std::size_t size = eqs.size();
    rep.bound = size == 0 ? 0 : std::min(k, size - 1);
    if (size == 0) return rep;
    const auto sets = solve_each(a, store, eqs, n);
    std::vector<std::size_t> all(size);
    for (std::size_t i = 0; i < size; ++i) all[i] = i;
    const PointSet whole = intersect(sets, all, a.size(), n);
    for (std::size_t r = 1; r <= rep.bound; ++r) {
        const bool hit = for_each_combination(size, r, [&](std::span<const std::size_t> c) {
            ++rep.subsets_checked;
            if (intersect(sets, complement_indices(size, c), a.size(), n) == whole) return false;
            rep.witness = std::vector<std::size_t>(c.begin(), c.end());
            return true;
        });
        if (hit) {
            rep.stable = false;
            break;
        }
    }
    return rep;
}

StableSplit stable_split(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> eqs, unsigned n,
                         const Budget& budget) {
    StableSplit out;
    if (eqs.empty()) {
        out.verified = true;
        return out;
    }
    const auto sets = solve_each(a, store, eqs, n);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return sets[g.front()] == sets[i]; });
        if (it == groups.end())
            groups.push_back({i});
        else
            it->push_back(i);
    }
    std::optional<std::vector<std::size_t>> best;
    std::size_t best_size = 0;
    for (const auto& g : groups) {
        auto removed = complement_indices(eqs.size(), std::vector<std::size_t>(g));
        if (!best || g.size() > best_size || (g.size() == best_size && removed < *best)) {
            best = std::move(removed);
            best_size = g.size();
        }
    }
    out.removed = *best;
    const auto rest = pick(eqs, complement_indices(eqs.size(), out.removed));
    if (rest.size() <= budget.max_subset_equations)
        out.verified = is_stable(a, store, rest, n, rest.size()).stable;
    return out;
}

ChainReport chain_report(const ZariskiLattice& lattice, const Budget& budget) {
    ChainReport rep;
    const std::size_t size = lattice.size();
    rep.lattice_size = size;
    if (size > std::min<std::size_t>(budget.max_lattice, 20000))
        throw BudgetError("chain report over a lattice this large is quadratic", size);

    // Members are sorted by size, so proper subsets come first.
    std::vector<std::size_t> len(size, 1);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (lattice.member(j) != lattice.member(i) && lattice.member(j).subset_of(lattice.member(i)))
                len[i] = std::max(len[i], len[j] + 1);
    for (auto l : len) rep.set_chain = std::max(rep.set_chain, l);

    const TermFunctionAlgebra& f = lattice.free_algebra();
    std::vector<RadicalIdeal> rads;
    rads.reserve(size);
    for (std::size_t i = 0; i < size; ++i) rads.push_back(radical_of_set(f, lattice.member(i)));
    std::vector<std::size_t> order(size);
    for (std::size_t i = 0; i < size; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return rads[x].classes() < rads[y].classes(); });
    // Coarsest first; a finer radical is strictly contained in a coarser one.
    std::vector<std::size_t> rlen(size, 1);
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < x; ++y) {
            const auto& fine = rads[order[x]];
            const auto& coarse = rads[order[y]];
            if (coarse.classes() < fine.classes() && fine.subset_of(coarse))
                rlen[order[x]] = std::max(rlen[order[x]], rlen[order[y]] + 1);
        }
    for (auto l : rlen) rep.radical_chain = std::max(rep.radical_chain, l);
    return rep;
}

AxiomatizationReport axiomatize_finite(const FiniteAlgebra& a, std::shared_ptr<TermStore> store,
                                       std::span<const Equation> sigma, unsigned n,
                                       std::span<const FiniteAlgebra> catalog, const Budget& budget) {
    AxiomatizationReport rep;
    const auto f = TermFunctionAlgebra::build(a, store, n, budget);
    rep.free_size = f.size();
    const FiniteAlgebra fa = to_finite_algebra(f);
    point_count(fa.size(), n, budget.max_points);
    const auto cert = reduce_system(fa, *store, sigma, n);
    rep.kept = cert.kept;
    rep.reduction_verified = cert.verified;
    const auto sigma0 = cert.subsystem();
    for (const auto& b : catalog) {
        const bool all = solve(b, *store, sigma, n).is_full();
        const bool some = solve(b, *store, sigma0, n).is_full();
        if (all != some) rep.mismatches.push_back(b.name());
    }
    return rep;
}

}  // namespace ualgeo
