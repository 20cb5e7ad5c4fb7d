#include "ualgeo/catalog.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

#include "ualgeo/error.hpp"

namespace ualgeo {

namespace {

Signature binary_signature() { return Signature(std::vector<Symbol>{{"mul", 2}}); }

}  // namespace

FiniteAlgebra z2_xor() {
    Signature sig(std::vector<Symbol>{{"mul", 2}, {"inv", 1}, {"e", 0}});
    return FiniteAlgebra("z2", sig, 2, {{0, 1, 1, 0}, {0, 1}, {0}});
}

FiniteAlgebra left_zero() { return FiniteAlgebra("left-zero", binary_signature(), 2, {{0, 0, 1, 1}}); }

FiniteAlgebra meet_semilattice() { return FiniteAlgebra("meet", binary_signature(), 2, {{0, 0, 0, 1}}); }

FiniteAlgebra trivial_algebra(const Signature& sig, std::string name) {
    std::vector<std::vector<Element>> tables;
    for (std::size_t i = 0; i < sig.size(); ++i) tables.push_back({0});
    const Signature plain(sig.symbols(), sig.name());
    return FiniteAlgebra(std::move(name), plain, 1, std::move(tables));
}

FiniteAlgebra random_binary(unsigned m, std::uint32_t seed, std::string name) {
    std::mt19937 rng(seed);
    std::vector<Element> table(std::size_t{m} * m);
    for (auto& e : table) e = static_cast<Element>(rng() % m);
    return FiniteAlgebra(std::move(name), binary_signature(), m, {std::move(table)});
}

std::vector<FiniteAlgebra> standard_catalog() {
    std::vector<FiniteAlgebra> out{z2_xor(), left_zero(), meet_semilattice(),
                                   trivial_algebra(z2_xor().signature(), "trivial-group"),
                                   trivial_algebra(binary_signature(), "trivial-binary")};
    char name[16];
    for (unsigned i = 0; i < 25; ++i) {
        std::snprintf(name, sizeof name, "rand2-%02u", i);
        out.push_back(random_binary(2, 1000 + i, name));
    }
    for (unsigned i = 0; i < 10; ++i) {
        std::snprintf(name, sizeof name, "rand3-%02u", i);
        out.push_back(random_binary(3, 3000 + i, name));
    }
    return out;
}

std::optional<FiniteAlgebra> catalog_algebra(std::string_view name) {
    for (auto& a : standard_catalog())
        if (a.name() == name) return a;
    return std::nullopt;
}

std::vector<FiniteAlgebra> subalgebras(const FiniteAlgebra& a) {
    const unsigned m = a.size();
    std::set<std::vector<Element>> universes;
    // Every subuniverse is generated by some subset; carriers here are small.
    if (m > 16) throw Error(ErrorKind::Budget, "subalgebra enumeration is limited to 16 elements");
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        std::vector<Element> seed;
        for (unsigned e = 0; e < m; ++e)
            if (mask >> e & 1) seed.push_back(static_cast<Element>(e));
        universes.insert(subuniverse_closure(a, seed));
    }
    std::vector<FiniteAlgebra> out;
    for (const auto& u : universes) {
        std::vector<Element> index(m, 0);
        for (std::size_t i = 0; i < u.size(); ++i) index[u[i]] = static_cast<Element>(i);
        std::vector<std::vector<Element>> tables;
        for (std::uint32_t s = 0; s < a.signature().size(); ++s) {
            const unsigned r = a.signature().symbols()[s].arity;
            std::vector<Element> t;
            std::vector<std::size_t> idx(r, 0);
            std::vector<Element> args(r);
            while (true) {
                for (unsigned j = 0; j < r; ++j) args[j] = u[idx[j]];
                t.push_back(index[a.operate(SymbolId{s}, args)]);
                unsigned j = r;
                while (j > 0 && ++idx[j - 1] == u.size()) idx[--j] = 0;
                if (j == 0) break;
            }
            tables.push_back(std::move(t));
        }
        std::string name = a.name() + "[";
        for (std::size_t i = 0; i < u.size(); ++i) name += (i ? "," : "") + std::to_string(u[i]);
        name += "]";
        out.emplace_back(name, a.signature(), static_cast<unsigned>(u.size()), std::move(tables));
    }
    return out;
}

TermId random_term(TermStore& store, unsigned n, unsigned depth, std::mt19937_64& rng) {
    const auto& symbols = store.signature().symbols();
    std::vector<SymbolId> leaves, inner;
    for (std::uint32_t s = 0; s < symbols.size(); ++s) (symbols[s].arity ? inner : leaves).push_back(SymbolId{s});
    const std::size_t leaf_count = n + leaves.size();
    if (leaf_count == 0) throw Error(ErrorKind::Precondition, "no variables or constants to build terms from");
    // Leaves stop the recursion with probability 1/3 above depth 0.
    if (depth == 0 || inner.empty() || rng() % 3 == 0) {
        const std::size_t k = rng() % leaf_count;
        if (k < n) return store.variable(static_cast<unsigned>(k));
        return store.apply(leaves[k - n], {});
    }
    const SymbolId f = inner[rng() % inner.size()];
    std::vector<TermId> kids;
    for (unsigned i = 0; i < symbols[f.value].arity; ++i) kids.push_back(random_term(store, n, depth - 1, rng));
    return store.apply(f, kids);
}

std::vector<Equation> random_system(TermStore& store, unsigned n, unsigned depth, std::size_t count,
                                    std::mt19937_64& rng) {
    std::vector<Equation> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const TermId lhs = random_term(store, n, depth, rng);
        const TermId rhs = random_term(store, n, depth, rng);
        out.push_back({lhs, rhs});
    }
    return out;
}

}  // namespace ualgeo
