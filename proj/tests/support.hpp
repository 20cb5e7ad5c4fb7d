#pragma once

// Shared fixtures and brute-force oracles for the unit tests. Oracles here
// work point by point from the operation tables and never call the library
// routine they are compared with.

#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "ualgeo/algebra.hpp"
#include "ualgeo/catalog.hpp"
#include "ualgeo/term.hpp"

namespace testing {

using namespace ualgeo;

inline std::shared_ptr<TermStore> store_for(const FiniteAlgebra& a) {
    return std::make_shared<TermStore>(a.signature());
}

// Points of A^n in the library's order: x1 most significant.
inline std::vector<std::vector<Element>> all_points(unsigned m, unsigned n) {
    std::vector<std::vector<Element>> out{{}};
    for (unsigned k = 0; k < n; ++k) {
        std::vector<std::vector<Element>> next;
        for (const auto& p : out)
            for (unsigned v = 0; v < m; ++v) {
                auto q = p;
                q.push_back(static_cast<Element>(v));
                next.push_back(std::move(q));
            }
        out = std::move(next);
    }
    return out;
}

// Direct recursive evaluation from the tables.
inline Element eval_naive(const TermStore& s, TermId t, const FiniteAlgebra& a, const std::vector<Element>& point) {
    switch (s.kind(t)) {
        case TermKind::Variable: return point[s.variable_index(t)];
        case TermKind::Coefficient: return s.coefficient_value(t);
        case TermKind::Apply: break;
    }
    const auto kids = s.children(t);
    std::size_t idx = 0;
    for (TermId c : kids) idx = idx * a.size() + eval_naive(s, c, a, point);
    return a.table(s.symbol(t))[idx];
}

inline std::vector<Element> table_of(const TermStore& s, TermId t, const FiniteAlgebra& a, unsigned n) {
    std::vector<Element> out;
    for (const auto& p : all_points(a.size(), n)) out.push_back(eval_naive(s, t, a, p));
    return out;
}

// Term functions of A in n variables by naive closure over value vectors.
inline std::set<std::vector<Element>> naive_clone(const FiniteAlgebra& a, unsigned n) {
    const auto pts = all_points(a.size(), n);
    std::set<std::vector<Element>> out;
    for (unsigned i = 0; i < n; ++i) {
        std::vector<Element> v;
        for (const auto& p : pts) v.push_back(p[i]);
        out.insert(v);
    }
    const auto& sig = a.signature();
    for (std::uint32_t s = 0; s < sig.size(); ++s)
        if (sig.symbols()[s].arity == 0) out.insert(std::vector<Element>(pts.size(), a.table(SymbolId{s})[0]));
    for (unsigned c = 0; c < sig.coefficient_count(); ++c)
        out.insert(std::vector<Element>(pts.size(), static_cast<Element>(c)));
    bool grew = true;
    while (grew) {
        grew = false;
        const std::vector<std::vector<Element>> cur(out.begin(), out.end());
        for (std::uint32_t s = 0; s < sig.size(); ++s) {
            const unsigned k = sig.symbols()[s].arity;
            if (k == 0) continue;
            std::vector<std::size_t> pick(k, 0);
            while (true) {
                std::vector<Element> v(pts.size());
                for (std::size_t p = 0; p < pts.size(); ++p) {
                    std::size_t idx = 0;
                    for (unsigned j = 0; j < k; ++j) idx = idx * a.size() + cur[pick[j]][p];
                    v[p] = a.table(SymbolId{s})[idx];
                }
                grew |= out.insert(std::move(v)).second;
                unsigned j = k;
                while (j > 0 && ++pick[j - 1] == cur.size()) pick[--j] = 0;
                if (j == 0) break;
            }
        }
    }
    return out;
}

inline FiniteAlgebra random_algebra(unsigned m, std::mt19937_64& rng) {
    Signature sig(std::vector<Symbol>{{"f", 2}, {"g", 1}, {"c", 0}});
    std::vector<std::vector<Element>> tables(3);
    for (std::size_t i = 0; i < std::size_t{m} * m; ++i) tables[0].push_back(static_cast<Element>(rng() % m));
    for (unsigned i = 0; i < m; ++i) tables[1].push_back(static_cast<Element>(rng() % m));
    tables[2].push_back(static_cast<Element>(rng() % m));
    return FiniteAlgebra("random", sig, m, tables);
}

// Small algebras most properties are exercised on.
inline std::vector<FiniteAlgebra> small_algebras() {
    std::vector<FiniteAlgebra> out{z2_xor(), left_zero(), meet_semilattice(), trivial_algebra(z2_xor().signature(), "t")};
    for (unsigned i = 0; i < 6; ++i) out.push_back(random_binary(2, 77 + i, "r2"));
    for (unsigned i = 0; i < 3; ++i) out.push_back(random_binary(3, 91 + i, "r3"));
    return out;
}

}  // namespace testing
