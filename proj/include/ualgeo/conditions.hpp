#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ualgeo/geometry.hpp"

namespace ualgeo {

// Equations consumed from a system: the list itself, or for a family the
// prefix followed by one pass over the cycle.
std::vector<Equation> consumed_equations(const System& s);

struct ReductionCertificate {
    std::vector<Equation> original;  // as consumed
    std::vector<std::size_t> kept;   // increasing indices into original
    PointSet solution;
    bool verified = false;

    std::vector<Equation> subsystem() const;
};

// Scans in order and keeps an equation iff it strictly shrinks the current
// solution set. verified is set after comparing solve(kept) with
// solve(original) bit for bit.
ReductionCertificate reduce_system(const FiniteAlgebra& a, const TermStore& store, const System& s, unsigned n);
ReductionCertificate reduce_system(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> eqs,
                                   unsigned n);

struct IndependenceReport {
    bool independent = true;
    bool exhaustive = true;
    std::uint64_t subsets_checked = 0;
    // A non-empty subset none of whose equations can be dropped without
    // keeping its solution set.
    std::optional<std::vector<std::size_t>> violating;
};

// Exhaustive over all non-empty subsets up to budget.max_subset_equations
// equations. Above that, samples `samples` random subsets when a seed is
// given and throws BudgetError otherwise.
IndependenceReport is_independent(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> eqs,
                                  unsigned n, const Budget& budget = Budget{},
                                  std::optional<std::uint64_t> sample_seed = std::nullopt,
                                  std::uint64_t samples = 100000);

struct IndependentSubsystem {
    std::vector<std::size_t> kept;  // increasing indices into the input
    bool equivalent = false;        // V(kept) = V(input)
    IndependenceReport independence;
};

// Greedy reduction, then removal of equations whose omission keeps the
// solution set until none is left. Every subset of such an irredundant
// system has an irredundant member, so the result is independent; both
// properties are re-checked.
IndependentSubsystem independent_subsystem(const FiniteAlgebra& a, const TermStore& store,
                                           std::span<const Equation> eqs, unsigned n,
                                           const Budget& budget = Budget{});

struct RadicalBasis {
    PointSet points;
    bool minimal = false;  // no single point can be dropped
    std::size_t pruned = 0;  // points removed after the greedy loop
};

// E0 subset of E with Rad(E0) = Rad(E): points of E are added in index
// order whenever they split a class of the current radical. Minimality is
// then checked by single removals, pruning until it holds.
RadicalBasis radical_basis(const TermFunctionAlgebra& f, const PointSet& e);
// radical_basis of A^n: equations holding on it are identities of A.
RadicalBasis identity_base(const TermFunctionAlgebra& f);

struct Witness {
    std::vector<std::size_t> indices;  // into the consumed equations
    bool minimum = false;              // exact search confirmed minimum size
    PointSet solution;                 // V(indices), re-verified
};

// Smallest found S0 subset of S with V(S0) inside V(eq). Throws
// Precondition unless V(S) is inside V(eq).
Witness q_omega_witness(const FiniteAlgebra& a, const TermStore& store, const System& s, const Equation& eq,
                        unsigned n, const Budget& budget = Budget{});
// Same against the union of the V(eqs).
Witness u_omega_witness(const FiniteAlgebra& a, const TermStore& store, const System& s,
                        std::span<const Equation> eqs, unsigned n, const Budget& budget = Budget{});

struct StabilityReport {
    bool stable = true;
    std::size_t bound = 0;  // largest removed subset size checked
    std::uint64_t subsets_checked = 0;
    std::optional<std::vector<std::size_t>> witness;  // first violating S'
};

// Checks V(S minus S') = V(S) for every proper S' with |S'| <= k, in order
// of size and then lexicographically. k is clipped to |S| - 1.
StabilityReport is_stable(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> eqs, unsigned n,
                          std::size_t k);

struct StableSplit {
    std::vector<std::size_t> removed;  // S0
    bool verified = false;             // S minus S0 passed is_stable at full bound
};

// Smallest S0 (first in size-then-lexicographic order) with S minus S0
// stable. A system is stable iff all its equations have one solution set,
// so S minus S0 is a largest such class; the choice is then re-checked
// with is_stable when it has at most budget.max_subset_equations members.
StableSplit stable_split(const FiniteAlgebra& a, const TermStore& store, std::span<const Equation> eqs, unsigned n,
                         const Budget& budget = Budget{});

struct ChainReport {
    std::size_t lattice_size = 0;
    std::size_t set_chain = 0;      // longest strictly descending chain of algebraic sets
    std::size_t radical_chain = 0;  // longest strictly descending chain of radicals
    bool equal() const { return set_chain == radical_chain; }
};

// Both chain lengths by dynamic programming over the materialized lattice:
// one over point containment, the other over refinement of the radicals.
ChainReport chain_report(const ZariskiLattice& lattice, const Budget& budget = Budget{});

struct AxiomatizationReport {
    std::vector<std::size_t> kept;  // Sigma0 as indices into Sigma
    bool reduction_verified = false;
    std::size_t free_size = 0;
    // Catalog members on which Sigma and Sigma0 disagree.
    std::vector<std::string> mismatches;
};

// Reads Sigma as a system over F = F(n) and reduces it there, then compares
// B |= Sigma0 with B |= Sigma over the catalog.
AxiomatizationReport axiomatize_finite(const FiniteAlgebra& a, std::shared_ptr<TermStore> store,
                                       std::span<const Equation> sigma, unsigned n,
                                       std::span<const FiniteAlgebra> catalog, const Budget& budget = Budget{});

}  // namespace ualgeo
