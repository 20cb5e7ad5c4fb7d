#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ualgeo/budget.hpp"
#include "ualgeo/term.hpp"

namespace ualgeo {

// Number of points of A^n, i.e. m^n. Throws BudgetError past `limit`.
std::size_t point_count(unsigned m, unsigned n, std::size_t limit = Budget{}.max_points);

// Mixed-radix encoding of A^n with x1 most significant.
std::size_t encode_point(std::span<const Element> point, unsigned m);
std::vector<Element> decode_point(std::size_t index, unsigned m, unsigned n);

// Values of the projection x_{var+1} over all points of A^n.
std::vector<Element> projection_values(unsigned m, unsigned n, unsigned var);

// A finite algebra: carrier {0..m-1} and one row-major table per symbol
// (first argument most significant).
class FiniteAlgebra {
public:
    FiniteAlgebra(std::string name, Signature signature, unsigned size,
                  std::vector<std::vector<Element>> tables, std::vector<std::string> element_names = {});

    const std::string& name() const { return name_; }
    const Signature& signature() const { return signature_; }
    unsigned size() const { return size_; }
    std::span<const Element> table(SymbolId symbol) const { return tables_[symbol.value]; }
    const std::vector<std::string>& element_names() const { return element_names_; }

    Element operate(SymbolId symbol, std::span<const Element> args) const;

    // The same algebra over the extended language with constants @0..@{m-1}.
    FiniteAlgebra with_coefficients() const;

    bool operator==(const FiniteAlgebra&) const = default;

private:
    std::string name_;
    Signature signature_;
    unsigned size_;
    std::vector<std::vector<Element>> tables_;
    std::vector<std::string> element_names_;
};

// Direct product A^k, index encoding as for encode_point. The carrier must
// stay within kMaxCarrier.
FiniteAlgebra power(const FiniteAlgebra& a, unsigned k);

// Least subuniverse containing seed, all constants and all coefficients.
// Returns the elements in increasing order.
std::vector<Element> subuniverse_closure(const FiniteAlgebra& a, std::span<const Element> seed);

struct HomomorphismViolation {
    SymbolId symbol;
    std::vector<Element> args;
};

struct HomomorphismCheck {
    bool ok = true;
    std::optional<HomomorphismViolation> violation;
    explicit operator bool() const { return ok; }
};

HomomorphismCheck is_homomorphism(std::span<const Element> map, const FiniteAlgebra& source,
                                  const FiniteAlgebra& target);

// Value of t at one point.
Element eval_term(const TermStore& store, TermId t, const FiniteAlgebra& a, std::span<const Element> point);

// Evaluates terms on every point of A^n at once, caching shared subterms.
class Tabulator {
public:
    Tabulator(const FiniteAlgebra& a, const TermStore& store, unsigned n);

    const std::vector<Element>& values(TermId t);
    unsigned arity() const { return n_; }
    std::size_t points() const { return points_; }

private:
    const FiniteAlgebra& algebra_;
    const TermStore& store_;
    unsigned n_;
    std::size_t points_;
    std::unordered_map<TermId, std::vector<Element>> cache_;
};

struct TermFunction {
    unsigned arity = 0;
    std::vector<Element> values;
    TermId witness;
};

TermFunction term_function(const FiniteAlgebra& a, const TermStore& store, TermId t, unsigned n);

// Pointwise application of one operation to argument value vectors.
void apply_pointwise(const FiniteAlgebra& a, SymbolId symbol, std::span<const Element* const> args,
                     Element* out, std::size_t count);

}  // namespace ualgeo
