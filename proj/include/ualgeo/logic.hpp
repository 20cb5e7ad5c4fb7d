#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ualgeo/free_algebra.hpp"
#include "ualgeo/geometry.hpp"

namespace ualgeo {

// Every term over the signature in x1..xn of depth at most d. Order: by
// depth; depth 0 is variables, constant symbols, coefficients; deeper
// levels go by symbol order, then lexicographically by child index.
class TermUniverse {
public:
    static TermUniverse build(TermStore& store, unsigned n, unsigned depth, const Budget& budget = Budget{});

    TermStore& store() const { return *store_; }
    unsigned arity() const { return n_; }
    unsigned depth_bound() const { return depth_; }
    std::size_t size() const { return terms_.size(); }
    TermId term(std::size_t i) const { return terms_[i]; }
    const std::vector<TermId>& terms() const { return terms_; }
    std::optional<std::uint32_t> index_of(TermId t) const;
    // Terms of depth at most k occupy [0, level_end(k)).
    std::size_t level_end(unsigned k) const { return level_end_[std::min<std::size_t>(k, depth_)]; }

    // Universe index of symbol(children) if that term is in the universe.
    std::optional<std::uint32_t> find_apply(SymbolId symbol, std::span<const std::uint32_t> children) const;
    // Children of an Apply node as universe indices.
    std::span<const std::uint32_t> children(std::uint32_t i) const {
        return {child_index_.data() + child_begin_[i], child_begin_[i + 1] - child_begin_[i]};
    }

private:
    TermUniverse() = default;
    std::uint64_t hash(std::uint32_t symbol, std::span<const std::uint32_t> children) const;
    void index_apply(std::uint32_t i);

    TermStore* store_ = nullptr;
    unsigned n_ = 0;
    unsigned depth_ = 0;
    std::vector<TermId> terms_;
    std::vector<std::size_t> level_end_;
    std::vector<std::uint32_t> by_term_;  // TermId value -> index + 1
    std::vector<std::uint32_t> child_begin_;
    std::vector<std::uint32_t> child_index_;
    std::vector<std::uint32_t> slots_;  // open addressing over Apply nodes
};

// Omitted marks a subproof cut off by the size limit of explain.
enum class Rule { Axiom, Reflexivity, Transitivity, Congruence, Substitution, Omitted };

// A derivation tree. Transitivity steps list their links in order; a link
// used right to left is printed with "(sym)".
struct Proof {
    Rule rule = Rule::Reflexivity;
    TermId lhs, rhs;
    std::size_t axiom = 0;            // Axiom: index into the input list
    bool reversed = false;            // link used right to left
    std::vector<TermId> substitution;  // Substitution: x_i -> substitution[i]
    std::vector<Proof> premises;
};

std::string format_proof(const TermStore& store, const Proof& proof, std::size_t max_lines = 2000);

// A congruence on a term universe kept as a union-find with a proof forest.
// Shared machinery of [S] and D(Sigma).
class GroundCongruence {
public:
    explicit GroundCongruence(const TermUniverse& universe);

    const TermUniverse& universe() const { return *universe_; }
    std::uint32_t find(std::uint32_t i) const;
    bool same(TermId a, TermId b) const;
    std::size_t classes() const { return classes_; }
    // Members of every class with at least two terms, each sorted by index,
    // classes ordered by smallest member.
    std::vector<std::vector<std::uint32_t>> nontrivial_classes() const;
    std::size_t nontrivial_pairs() const;

    std::optional<Proof> explain(TermId a, TermId b) const;

    // Merges a and b (universe indices) with the given reason and closes
    // under congruence. Returns the number of class merges performed.
    std::size_t merge_axiom(std::uint32_t a, std::uint32_t b, std::size_t axiom);
    std::size_t merge_substitution(std::uint32_t a, std::uint32_t b, std::uint32_t premise_lhs,
                                   std::uint32_t premise_rhs, std::vector<TermId> substitution);

private:
    struct Edge {
        Edge(std::uint32_t a, std::uint32_t b, Rule rule) : a(a), b(b), rule(rule) {}
        std::uint32_t a, b;
        Rule rule;
        std::size_t axiom = 0;
        std::uint32_t p = 0, q = 0;
        std::vector<TermId> substitution;
    };
    struct Pending {
        std::uint32_t a, b;
        std::size_t edge;
    };

    std::size_t process(std::vector<Pending> work);
    std::uint64_t signature_hash(std::uint32_t node) const;
    bool same_signature(std::uint32_t x, std::uint32_t y) const;
    void reroot(std::uint32_t node);
    Proof explain_indices(std::uint32_t a, std::uint32_t b, std::size_t& budget) const;
    Proof explain_edge(std::size_t edge, bool reversed, std::size_t& budget) const;

    const TermUniverse* universe_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::vector<std::vector<std::uint32_t>> uses_;  // class rep -> parent nodes
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> signatures_;
    std::size_t classes_;
    // Proof forest: each node points towards its root along an edge.
    std::vector<std::uint32_t> proof_parent_;
    std::vector<std::size_t> proof_edge_;
    std::vector<Edge> edges_;
};

// [S] restricted to the universe. Throws Precondition when a side of an
// equation is not in the universe.
GroundCongruence congruence_closure(std::span<const Equation> system, const TermUniverse& universe);

// D(Sigma) in the universe: closure under equivalence, congruence and
// substitution instances x_i -> universe terms whose both sides stay in the
// universe. Axioms with a side outside the universe are skipped (counted).
struct DeductiveClosure {
    std::shared_ptr<const TermUniverse> universe;
    std::unique_ptr<GroundCongruence> congruence;
    std::size_t skipped_axioms = 0;
    std::size_t rounds = 0;
};

DeductiveClosure deductive_closure(std::span<const Equation> sigma, std::shared_ptr<const TermUniverse> universe);

// Id_A(x1..xn) as the diagonal congruence on F(n).
class IdentitySet {
public:
    static IdentitySet build(const FiniteAlgebra& a, std::shared_ptr<TermStore> store, unsigned n,
                             const Budget& budget = Budget{});

    const TermFunctionAlgebra& free_algebra() const { return *f_; }
    const RadicalIdeal& radical() const { return radical_; }
    // Class (element of F(n)) of the function a term denotes.
    std::uint32_t class_of(TermId t) const { return radical_.class_of(f_->element_of(t)); }
    bool holds(TermId p, TermId q) const { return radical_.contains(*f_, p, q); }
    bool holds(const Equation& eq) const { return holds(eq.lhs, eq.rhs); }

private:
    std::shared_ptr<TermFunctionAlgebra> f_;
    RadicalIdeal radical_;
};

struct Lemma1Report {
    std::size_t terms = 0;
    std::size_t pairs = 0;
    std::size_t identities = 0;
    std::size_t mismatches = 0;
    std::optional<Equation> first_mismatch;
    bool ok() const { return mismatches == 0; }
};

// Over every pair of the depth-d universe: "same element of F(n)" agrees
// with "equal at every point of A^n" (evaluated term by term).
Lemma1Report verify_lemma1(const FiniteAlgebra& a, std::shared_ptr<TermStore> store, unsigned n, unsigned d,
                           const Budget& budget = Budget{});

struct Corollary1Report {
    std::size_t free_size = 0;
    std::size_t terms = 0;
    std::size_t equations = 0;
    std::uint64_t tuples = 0;
    std::uint64_t solutions = 0;  // (tuple, equation) pairs solved in F
    std::uint64_t violations = 0;
    bool literal = false;  // substituted terms were built and evaluated
    bool skipped = false;  // tuple budget exceeded; nothing checked
    std::string first_violation;
    bool ok() const { return violations == 0 && !skipped; }
};

// For F = F(n_free) and every equation over the depth-d universe in n_eq
// variables and every tuple of F^n_eq: the tuple solves the equation in F
// (operations of F on elements) iff both sides agree as term functions
// (pointwise tabulation in A) iff the substituted equation is an identity of
// A (terms substituted and evaluated, when within literal_budget). Skipped
// when tuples * terms exceeds budget.max_universe * 4096.
Corollary1Report verify_corollary1(const FiniteAlgebra& a, std::shared_ptr<TermStore> store, unsigned n_eq,
                                   unsigned n_free, unsigned d, const Budget& budget = Budget{},
                                   std::uint64_t literal_budget = 200000);

}  // namespace ualgeo
