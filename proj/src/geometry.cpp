#include "ualgeo/geometry.hpp"

#include <algorithm>
#include <numeric>

#include "ualgeo/error.hpp"
#include "ualgeo/kernels.hpp"

namespace ualgeo {

namespace {

void require_full_space(const TermFunctionAlgebra& f) {
    if (!f.on_full_space()) throw Error(ErrorKind::Semantic, "expected functions tabulated on all of A^n");
}

void require_shape(const TermFunctionAlgebra& f, const PointSet& y) {
    if (y.carrier() != f.base().size() || y.arity() != f.arity())
        throw Error(ErrorKind::Semantic, "point set does not live in A^" + std::to_string(f.arity()));
}

// Equalizer as a word vector of the PointSet layout.
void equal_words(std::span<const Element> a, std::span<const Element> b, std::uint64_t* out) {
    simd::kernels().equal_mask(a.data(), b.data(), a.size(), out);
}

}  // namespace

// ---------------------------------------------------------------- solving

PointSet solve(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> system, unsigned n) {
    PointSet result = PointSet::full(a.size(), n);
    if (system.empty()) return result;
    Tabulator tab(a, store, n);
    PointSet scratch(a.size(), n);
    for (const Equation& eq : system) {
        if (store.variable_bound(eq.lhs) > n || store.variable_bound(eq.rhs) > n)
            throw Error(ErrorKind::Semantic, "equation uses variables beyond x" + std::to_string(n));
        const auto& l = tab.values(eq.lhs);
        const auto& r = tab.values(eq.rhs);
        equal_words(l, r, scratch.words().data());
        result &= scratch;
    }
    return result;
}

std::vector<PointSet> solve_each(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> system,
                                 unsigned n) {
    std::vector<PointSet> out;
    out.reserve(system.size());
    if (system.empty()) return out;
    Tabulator tab(a, store, n);
    for (const Equation& eq : system) {
        if (store.variable_bound(eq.lhs) > n || store.variable_bound(eq.rhs) > n)
            throw Error(ErrorKind::Semantic, "equation uses variables beyond x" + std::to_string(n));
        PointSet s(a.size(), n);
        equal_words(tab.values(eq.lhs), tab.values(eq.rhs), s.words().data());
        out.push_back(std::move(s));
    }
    return out;
}

bool is_consistent(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> system, unsigned n) {
    return !solve(a, store, system, n).is_empty();
}

PointSet open_complement(const FiniteAlgebra& a, const TermStore& store, const Equation& eq, unsigned n) {
    return solve(a, store, std::span<const Equation>(&eq, 1), n).complement();
}

PointSet v_star(const FiniteAlgebra& a, const TermStore& store, const System& s, unsigned n) {
    if (!s.is_family()) return PointSet::full(a.size(), n);
    return solve(a, store, s.cycle, n);
}

PointSet equalizer(const TermFunctionAlgebra& f, std::uint32_t i, std::uint32_t j) {
    require_full_space(f);
    PointSet out(f.base().size(), f.arity());
    equal_words(f.values(i), f.values(j), out.words().data());
    return out;
}

// ---------------------------------------------------------------- radicals

RadicalIdeal::RadicalIdeal(std::vector<std::uint32_t> class_of) : class_of_(std::move(class_of)) {
    for (std::uint32_t e = 0; e < class_of_.size(); ++e) {
        const std::uint32_t c = class_of_[e];
        if (c == representative_.size()) representative_.push_back(e);
        else if (c > representative_.size()) throw Error(ErrorKind::Semantic, "class ids must be numbered by first member");
    }
}

bool RadicalIdeal::contains(const TermFunctionAlgebra& f, TermId p, TermId q) const {
    if (f.size() != size()) throw Error(ErrorKind::Semantic, "radical belongs to a different free algebra");
    return related(f.element_of(p), f.element_of(q));
}

bool RadicalIdeal::subset_of(const RadicalIdeal& other) const {
    if (other.size() != size()) return false;
    if (classes() < other.classes()) return false;
    for (std::uint32_t e = 0; e < class_of_.size(); ++e)
        if (other.class_of_[e] != other.class_of_[representative_[class_of_[e]]]) return false;
    return true;
}

RadicalIdeal radical_of_set(const TermFunctionAlgebra& f, const PointSet& y) {
    require_full_space(f);
    require_shape(f, y);
    const auto pts = y.members();
    const unsigned m = f.base().size();
    std::vector<std::uint32_t> class_of(f.size());

    // Key each element by its restriction to Y: a mixed-radix code when it
    // fits a direct table, a row hash otherwise.
    std::uint64_t space = 1;
    bool direct = true;
    for (std::size_t i = 0; i < pts.size() && direct; ++i) {
        space *= m;
        direct = space <= (std::uint64_t{1} << 20);
    }
    std::uint32_t next = 0;
    if (direct) {
        std::vector<std::uint32_t> seen(space, 0xffffffffu);
        for (std::uint32_t e = 0; e < f.size(); ++e) {
            const auto v = f.values(e);
            std::uint64_t code = 0;
            for (std::size_t p : pts) code = code * m + v[p];
            if (seen[code] == 0xffffffffu) seen[code] = next++;
            class_of[e] = seen[code];
        }
    } else {
        RowIndex index(pts.size());
        std::vector<Element> row(pts.size());
        for (std::uint32_t e = 0; e < f.size(); ++e) {
            const auto v = f.values(e);
            for (std::size_t i = 0; i < pts.size(); ++i) row[i] = v[pts[i]];
            class_of[e] = index.insert(row).first;
        }
    }
    return RadicalIdeal(std::move(class_of));
}

RadicalIdeal radical_of_system(const TermFunctionAlgebra& f, const TermStore& store,
                               std::span<const Equation> system) {
    return radical_of_set(f, solve(f.base(), store, system, f.arity()));
}

CongruenceCheck is_congruence(const TermFunctionAlgebra& f, const RadicalIdeal& r) {
    if (r.size() != f.size()) throw Error(ErrorKind::Semantic, "radical belongs to a different free algebra");
    const Signature& sig = f.base().signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
        const SymbolId sym{static_cast<std::uint32_t>(s)};
        const unsigned k = sig.symbol(sym).arity;
        if (k == 0 || f.size() == 0) continue;
        std::vector<std::uint32_t> args(k, 0), reps(k);
        while (true) {
            for (unsigned j = 0; j < k; ++j) reps[j] = r.representative(r.class_of(args[j]));
            if (!r.related(f.apply(sym, args), f.apply(sym, reps))) {
                CongruenceCheck out;
                out.ok = false;
                out.symbol = sym;
                out.lhs_args = args;
                out.rhs_args = reps;
                return out;
            }
            unsigned j = k;
            while (j > 0 && ++args[j - 1] == f.size()) args[--j] = 0;
            if (j == 0) break;
        }
    }
    return {};
}

PointSet algebraic_closure(const TermFunctionAlgebra& f, const PointSet& y) {
    const RadicalIdeal rad = radical_of_set(f, y);
    PointSet out = PointSet::full(f.base().size(), f.arity());
    PointSet eq(f.base().size(), f.arity());
    for (std::uint32_t e = 0; e < f.size(); ++e) {
        const std::uint32_t rep = rad.representative(rad.class_of(e));
        if (rep == e) continue;
        equal_words(f.values(e), f.values(rep), eq.words().data());
        out &= eq;
        if (out == y) break;  // cannot shrink below Y
    }
    return out;
}

bool certify(const TermFunctionAlgebra& f, AlgebraicSet& set) {
    if (set.defining && solve(f.base(), f.store(), *set.defining, f.arity()) != set.points) {
        set.certified = false;
        return false;
    }
    set.certified = algebraic_closure(f, set.points) == set.points;
    return set.certified;
}

// ---------------------------------------------------------------- lattice

namespace {

using PairList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

PairList merge_pairs(const PairList& a, const PairList& b) {
    PairList out;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Lattice construction over at most 64 points with masks as integers.
struct SmallLattice {
    std::vector<std::uint64_t> sets;
    std::vector<PairList> defining;
};

SmallLattice build_small(const TermFunctionAlgebra& f, const Budget& budget, std::size_t& pairs_examined) {
    const std::size_t pts = f.points();
    const unsigned m = f.base().size();
    const std::uint64_t full = pts == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << pts) - 1;
    // No more than 2^pts subsets can ever show up.
    const std::uint64_t max_subsets = pts >= 63 ? UINT64_MAX : (std::uint64_t{1} << pts);

    SmallLattice out;
    std::unordered_map<std::uint64_t, std::size_t> seen;
    std::vector<bool> bitmap;
    const bool use_bitmap = pts <= 24;
    if (use_bitmap) bitmap.assign(std::size_t{1} << pts, false);
    auto add = [&](std::uint64_t set, PairList defining) {
        if (use_bitmap) {
            if (bitmap[set]) return false;
            bitmap[set] = true;
        } else if (!seen.emplace(set, out.sets.size()).second) {
            return false;
        }
        if (out.sets.size() >= budget.max_lattice)
            throw BudgetError("Zariski lattice exceeds " + std::to_string(budget.max_lattice) + " members",
                              out.sets.size());
        out.sets.push_back(set);
        out.defining.push_back(std::move(defining));
        return true;
    };
    add(full, {});

    // Per element and value, the mask of points taking that value.
    const std::size_t k = f.size();
    const bool one_hot = m <= 8;
    std::vector<std::uint64_t> masks(one_hot ? k * m : 0, 0);
    if (one_hot) {
        for (std::size_t e = 0; e < k; ++e) {
            const auto v = f.values(e);
            for (std::size_t p = 0; p < pts; ++p) masks[e * m + v[p]] |= std::uint64_t{1} << p;
        }
    }
    std::uint64_t word = 0;
    for (std::uint32_t i = 0; i < k && out.sets.size() < max_subsets; ++i) {
        for (std::uint32_t j = i + 1; j < k; ++j) {
            ++pairs_examined;
            std::uint64_t eq = 0;
            if (one_hot) {
                const std::uint64_t* a = masks.data() + std::size_t{i} * m;
                const std::uint64_t* b = masks.data() + std::size_t{j} * m;
                for (unsigned v = 0; v < m; ++v) eq |= a[v] & b[v];
            } else {
                simd::kernels().equal_mask(f.values(i).data(), f.values(j).data(), pts, &word);
                eq = word;
            }
            if (add(eq, {{i, j}}) && out.sets.size() >= max_subsets) break;
        }
    }

    // Meet closure by worklist.
    for (std::size_t next = 1; next < out.sets.size(); ++next) {
        for (std::size_t other = 0; other < next; ++other) {
            const std::uint64_t meet = out.sets[next] & out.sets[other];
            if (use_bitmap ? bitmap[meet] : seen.count(meet) != 0) continue;
            add(meet, merge_pairs(out.defining[other], out.defining[next]));
        }
    }
    return out;
}

}  // namespace

ZariskiLattice ZariskiLattice::build(const TermFunctionAlgebra& f, const Budget& budget) {
    require_full_space(f);
    ZariskiLattice z;
    z.f_ = &f;
    const unsigned m = f.base().size();
    const unsigned n = f.arity();
    const std::size_t pts = f.points();

    std::vector<PointSet> sets;
    std::vector<PairList> defining;
    if (pts <= 64) {
        SmallLattice small = build_small(f, budget, z.pairs_examined_);
        for (std::uint64_t s : small.sets) {
            PointSet ps(m, n);
            if (!ps.words().empty()) ps.words()[0] = s;
            sets.push_back(std::move(ps));
        }
        defining = std::move(small.defining);
    } else {
        std::unordered_map<PointSet, std::size_t> seen;
        auto add = [&](PointSet s, PairList d) {
            if (!seen.emplace(s, sets.size()).second) return;
            if (sets.size() >= budget.max_lattice)
                throw BudgetError("Zariski lattice exceeds " + std::to_string(budget.max_lattice) + " members",
                                  sets.size());
            sets.push_back(std::move(s));
            defining.push_back(std::move(d));
        };
        add(PointSet::full(m, n), {});
        PointSet eq(m, n);
        for (std::uint32_t i = 0; i < f.size(); ++i) {
            for (std::uint32_t j = i + 1; j < f.size(); ++j) {
                ++z.pairs_examined_;
                equal_words(f.values(i), f.values(j), eq.words().data());
                if (!seen.count(eq)) add(eq, {{i, j}});
            }
        }
        for (std::size_t next = 1; next < sets.size(); ++next) {
            for (std::size_t other = 0; other < next; ++other) {
                PointSet meet = sets[next] & sets[other];
                if (seen.count(meet)) continue;
                add(std::move(meet), merge_pairs(defining[other], defining[next]));
            }
        }
    }

    std::vector<std::size_t> order(sets.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return size_lex_less(sets[a], sets[b]); });
    for (std::size_t i : order) {
        z.members_.push_back(std::move(sets[i]));
        z.defining_.push_back(std::move(defining[i]));
    }
    z.finish();
    return z;
}

void ZariskiLattice::finish() {
    index_.clear();
    for (std::size_t i = 0; i < members_.size(); ++i) index_.emplace(members_[i], i);
    // Members are sorted by size, so the first member containing a point is
    // the smallest one (meets are members, so the smallest is unique).
    const std::size_t pts = members_.back().universe();
    point_closure_.assign(pts, members_.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < members_.size() && assigned < pts; ++i) {
        for (std::size_t p : members_[i].members()) {
            if (point_closure_[p] == members_.size()) {
                point_closure_[p] = i;
                ++assigned;
            }
        }
    }
    irreducible_.assign(members_.size(), false);
    for (std::size_t p = 0; p < pts; ++p) irreducible_[point_closure_[p]] = true;
}

std::optional<std::size_t> ZariskiLattice::find(const PointSet& s) const {
    if (auto it = index_.find(s); it != index_.end()) return it->second;
    return std::nullopt;
}

std::vector<Equation> ZariskiLattice::defining_system(std::size_t i) const {
    std::vector<Equation> out;
    for (auto [a, b] : defining_[i]) out.push_back({f_->witness(a), f_->witness(b)});
    return out;
}

std::string ZariskiLattice::describe(std::size_t i) const {
    if (defining_[i].empty()) return "A^" + std::to_string(f_->arity());
    std::string out = "V(";
    bool first = true;
    for (auto [a, b] : defining_[i]) {
        if (!first) out += ", ";
        first = false;
        out += f_->store().print(f_->witness(a)) + "~" + f_->store().print(f_->witness(b));
    }
    return out + ")";
}

PointSet zariski_closure(const ZariskiLattice& lattice, const PointSet& y) {
    const PointSet& top = lattice.member(lattice.top());
    if (y.carrier() != top.carrier() || y.arity() != top.arity())
        throw Error(ErrorKind::Semantic, "point set does not match the lattice's space");
    PointSet out(y.carrier(), y.arity());
    for (std::size_t p : y.members()) {
        if (out.contains(p)) continue;
        out |= lattice.member(lattice.point_closure(p));
    }
    return out;
}

DomainReport is_equational_domain(const ZariskiLattice& lattice) {
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        for (std::size_t j = i + 1; j < lattice.size(); ++j) {
            const PointSet& a = lattice.member(i);
            const PointSet& b = lattice.member(j);
            if (a.subset_of(b) || b.subset_of(a)) continue;
            if (!lattice.contains(a | b)) return {false, std::make_pair(i, j)};
        }
    }
    return {};
}

std::vector<PointSet> irreducible_decomposition(const ZariskiLattice& lattice, const PointSet& closed) {
    if (zariski_closure(lattice, closed) != closed)
        throw Error(ErrorKind::Precondition, "set is not a finite union of algebraic sets");
    std::vector<std::size_t> candidates;
    for (std::size_t p : closed.members()) candidates.push_back(lattice.point_closure(p));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::vector<PointSet> out;
    for (std::size_t c : candidates) {
        bool maximal = true;
        for (std::size_t d : candidates) {
            if (d != c && lattice.member(c).subset_of(lattice.member(d))) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(lattice.member(c));
    }
    std::sort(out.begin(), out.end(), size_lex_less);
    return out;
}

// ---------------------------------------------------------------- coordinate algebras

CoordinateAlgebra coordinate_algebra(const TermFunctionAlgebra& f, const PointSet& y) {
    require_full_space(f);
    require_shape(f, y);
    const auto pts = y.members();
    std::vector<std::uint32_t> map;
    TermFunctionAlgebra t = TermFunctionAlgebra::restrict(f, pts, &map);
    return {y, std::move(t), std::move(map)};
}

IsomorphismReport check_coordinate_isomorphism(const TermFunctionAlgebra& f, const RadicalIdeal& radical,
                                               const CoordinateAlgebra& coord) {
    IsomorphismReport report;
    const TermFunctionAlgebra& t = coord.algebra;
    const auto pts = coord.points.members();
    if (radical.size() != f.size()) {
        report.well_defined = false;
        report.failure = "radical and free algebra differ in size";
        return report;
    }
    std::vector<Element> row(pts.size());
    auto image = [&](std::uint32_t e) -> std::optional<std::uint32_t> {
        const auto v = f.values(e);
        for (std::size_t i = 0; i < pts.size(); ++i) row[i] = v[pts[i]];
        return t.find(row);
    };

    // phi([e]) = e|_Y, computed from the class representative.
    const std::size_t classes = radical.classes();
    std::vector<std::uint32_t> phi(classes);
    for (std::uint32_t c = 0; c < classes; ++c) {
        const auto img = image(radical.representative(c));
        if (!img) {
            report.well_defined = false;
            report.failure = "restriction of class " + std::to_string(c) + " is not in T(Y)";
            return report;
        }
        phi[c] = *img;
    }
    for (std::uint32_t e = 0; e < f.size(); ++e) {
        const auto img = image(e);
        if (!img || *img != phi[radical.class_of(e)]) {
            report.well_defined = false;
            report.failure = "element " + std::to_string(e) + " restricts differently from its class";
            return report;
        }
    }
    std::vector<bool> hit(t.size(), false);
    for (std::uint32_t c = 0; c < classes; ++c) {
        if (hit[phi[c]]) {
            report.injective = false;
            report.failure = "two classes restrict to the same function";
        }
        hit[phi[c]] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
        report.surjective = false;
        if (report.failure.empty()) report.failure = "some restricted function is not hit";
    }
    if (!report.injective || !report.surjective) return report;

    const Signature& sig = f.base().signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
        const SymbolId sym{static_cast<std::uint32_t>(s)};
        const unsigned k = sig.symbol(sym).arity;
        if (k > 0 && classes == 0) continue;
        if (k == 2 && f.codec() && t.codec()) {
            // Row at a time over packed codes.
            const std::size_t cf = f.codec()->chunks();
            const std::size_t ct = t.codec()->chunks();
            std::vector<std::uint8_t> rep_chunks(classes * cf), img_chunks(classes * ct);
            for (std::uint32_t c = 0; c < classes; ++c) {
                std::copy_n(f.chunks(radical.representative(c)), cf, rep_chunks.begin() + c * cf);
                std::copy_n(t.chunks(phi[c]), ct, img_chunks.begin() + c * ct);
            }
            std::vector<std::uint32_t> image_of(f.size());
            for (std::uint32_t e = 0; e < f.size(); ++e) image_of[e] = phi[radical.class_of(e)];
            std::vector<std::uint32_t> codes_f(classes), codes_t(classes);
            for (std::uint32_t c1 = 0; c1 < classes; ++c1) {
                f.codec()->apply_row(sym, rep_chunks.data() + c1 * cf, rep_chunks.data(), classes, codes_f.data());
                t.codec()->apply_row(sym, img_chunks.data() + c1 * ct, img_chunks.data(), classes, codes_t.data());
                for (std::uint32_t c2 = 0; c2 < classes; ++c2) {
                    const std::uint32_t e = f.by_code(codes_f[c2]);
                    const std::uint32_t rhs = t.by_code(codes_t[c2]);
                    if (e == 0xffffffffu || rhs == 0xffffffffu || image_of[e] != rhs) {
                        report.homomorphism = false;
                        report.failure = "operation " + sig.symbol(sym).name + " is not preserved";
                        return report;
                    }
                }
            }
            continue;
        }
        std::vector<std::uint32_t> cls(k, 0), reps(k), images(k);
        while (true) {
            for (unsigned j = 0; j < k; ++j) {
                reps[j] = radical.representative(cls[j]);
                images[j] = phi[cls[j]];
            }
            const std::uint32_t lhs = phi[radical.class_of(f.apply(sym, reps))];
            const std::uint32_t rhs = t.apply(sym, images);
            if (lhs != rhs) {
                report.homomorphism = false;
                report.failure = "operation " + sig.symbol(sym).name + " is not preserved";
                return report;
            }
            unsigned j = k;
            while (j > 0 && ++cls[j - 1] == classes) cls[--j] = 0;
            if (j == 0) break;
        }
    }
    return report;
}

}  // namespace ualgeo
