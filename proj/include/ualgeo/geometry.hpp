#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ualgeo/free_algebra.hpp"
#include "ualgeo/point_set.hpp"

namespace ualgeo {

// V_A(S): points of A^n satisfying every equation. Empty S gives A^n.
PointSet solve(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> system, unsigned n);
// V_A(e) for each equation separately, in order.
std::vector<PointSet> solve_each(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> system,
                                 unsigned n);
bool is_consistent(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> system, unsigned n);
// C_A(p~q) = A^n minus V_A(p~q).
PointSet open_complement(const FiniteAlgebra& a, const TermStore& store, const Equation& eq, unsigned n);
// Points failing only finitely many equations of s. For a finite system that
// is every point; for a family it is the solution set of the cycle.
PointSet v_star(const FiniteAlgebra& a, const TermStore& store, const System& s, unsigned n);

// Points where elements i and j of f agree. f must be on the whole space.
PointSet equalizer(const TermFunctionAlgebra& f, std::uint32_t i, std::uint32_t j);

// Rad(Y) as a partition of F(n): two elements are in one class iff their
// functions agree on Y. Class ids are numbered by first member.
class RadicalIdeal {
public:
    RadicalIdeal() = default;
    explicit RadicalIdeal(std::vector<std::uint32_t> class_of);

    std::size_t size() const { return class_of_.size(); }
    std::size_t classes() const { return representative_.size(); }
    std::uint32_t class_of(std::uint32_t element) const { return class_of_[element]; }
    std::uint32_t representative(std::uint32_t cls) const { return representative_[cls]; }
    const std::vector<std::uint32_t>& partition() const { return class_of_; }
    bool related(std::uint32_t a, std::uint32_t b) const { return class_of_[a] == class_of_[b]; }

    // (p,q) in Rad(Y): both terms must denote elements of f.
    bool contains(const TermFunctionAlgebra& f, TermId p, TermId q) const;
    // Inclusion of the relations: every pair related here is related in other.
    bool subset_of(const RadicalIdeal& other) const;

    bool operator==(const RadicalIdeal& other) const { return class_of_ == other.class_of_; }

private:
    std::vector<std::uint32_t> class_of_;
    std::vector<std::uint32_t> representative_;
};

RadicalIdeal radical_of_set(const TermFunctionAlgebra& f, const PointSet& y);
RadicalIdeal radical_of_system(const TermFunctionAlgebra& f, const TermStore& store,
                               std::span<const Equation> system);

struct CongruenceCheck {
    bool ok = true;
    // On failure: symbol and two argument tuples, related componentwise,
    // whose images are unrelated.
    std::optional<SymbolId> symbol;
    std::vector<std::uint32_t> lhs_args, rhs_args;
    explicit operator bool() const { return ok; }
};

// Full operation-table scan. Tuples grow as classes^arity * members, so
// this is for desk-scale algebras.
CongruenceCheck is_congruence(const TermFunctionAlgebra& f, const RadicalIdeal& r);

// Y^ac = V_A(Rad(Y)).
PointSet algebraic_closure(const TermFunctionAlgebra& f, const PointSet& y);

struct AlgebraicSet {
    PointSet points;
    std::optional<std::vector<Equation>> defining;
    bool certified = false;
};

// Sets certified after checking points = V_A(Rad(points)); returns it.
bool certify(const TermFunctionAlgebra& f, AlgebraicSet& set);

// All algebraic subsets of A^n: the meet-closure of the equalizers of pairs
// of F(n) together with A^n. Members are sorted by (size, lexicographic).
class ZariskiLattice {
public:
    static ZariskiLattice build(const TermFunctionAlgebra& f, const Budget& budget = Budget{});

    const TermFunctionAlgebra& free_algebra() const { return *f_; }
    std::size_t size() const { return members_.size(); }
    const PointSet& member(std::size_t i) const { return members_[i]; }
    const std::vector<PointSet>& members() const { return members_; }
    std::optional<std::size_t> find(const PointSet& s) const;
    bool contains(const PointSet& s) const { return find(s).has_value(); }
    // Index of A^n.
    std::size_t top() const { return members_.size() - 1; }

    // A defining system for member i as pairs of F-elements; the empty list
    // defines A^n.
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& defining_pairs(std::size_t i) const {
        return defining_[i];
    }
    std::vector<Equation> defining_system(std::size_t i) const;
    // "V(x1~x2, x2~x3)", or "A^n" for the whole space.
    std::string describe(std::size_t i) const;

    // Smallest member containing point p.
    std::size_t point_closure(std::size_t p) const { return point_closure_[p]; }
    bool is_irreducible(std::size_t i) const { return irreducible_[i]; }

    // Number of equalizer pairs examined before the member set was complete.
    std::size_t pairs_examined() const { return pairs_examined_; }

private:
    ZariskiLattice() = default;
    void finish();

    const TermFunctionAlgebra* f_ = nullptr;
    std::vector<PointSet> members_;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> defining_;
    std::unordered_map<PointSet, std::size_t> index_;
    std::vector<std::size_t> point_closure_;
    std::vector<bool> irreducible_;
    std::size_t pairs_examined_ = 0;
};

// Smallest closed set (finite union of members, or empty) containing y.
PointSet zariski_closure(const ZariskiLattice& lattice, const PointSet& y);

struct DomainReport {
    bool domain = true;
    // Two members whose union is not a member.
    std::optional<std::pair<std::size_t, std::size_t>> counterexample;
};

DomainReport is_equational_domain(const ZariskiLattice& lattice);

// The irreducible components of a closed set, sorted by (size, lexicographic).
// Throws Precondition if the input is not a union of members.
std::vector<PointSet> irreducible_decomposition(const ZariskiLattice& lattice, const PointSet& closed);

// T(Y): the term functions of F(n) restricted to Y, with the quotient map
// F(n) -> T(Y). For empty Y every function restricts to the empty one, so
// T(Y) has one element whenever F(n) is non-empty.
struct CoordinateAlgebra {
    PointSet points;
    TermFunctionAlgebra algebra;
    std::vector<std::uint32_t> quotient_map;
};

CoordinateAlgebra coordinate_algebra(const TermFunctionAlgebra& f, const PointSet& y);

struct IsomorphismReport {
    bool well_defined = true;
    bool injective = true;
    bool surjective = true;
    bool homomorphism = true;
    std::string failure;
    bool ok() const { return well_defined && injective && surjective && homomorphism; }
};

// Checks that [f] -> f|_Y is a bijective homomorphism from F(n)/Rad(Y) onto
// T(Y). The quotient's operations are computed on class representatives.
IsomorphismReport check_coordinate_isomorphism(const TermFunctionAlgebra& f, const RadicalIdeal& radical,
                                               const CoordinateAlgebra& coord);

}  // namespace ualgeo
