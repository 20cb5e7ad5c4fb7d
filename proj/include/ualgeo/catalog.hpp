#pragma once

#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "ualgeo/algebra.hpp"
#include "ualgeo/term.hpp"

namespace ualgeo {

// ({0,1}, xor, identity, 0) over mul/2, inv/1, e/0.
FiniteAlgebra z2_xor();
// ({0,1}, (a,b) -> a) over mul/2.
FiniteAlgebra left_zero();
// ({0,1}, min) over mul/2.
FiniteAlgebra meet_semilattice();
// The one-element algebra of a signature.
FiniteAlgebra trivial_algebra(const Signature& sig, std::string name);
// A single binary operation "mul" with entries drawn from a Mersenne
// twister seeded with `seed`, row-major.
FiniteAlgebra random_binary(unsigned m, std::uint32_t seed, std::string name);

// The named catalog: z2, left-zero, meet, trivial-group, trivial-binary,
// rand2-00..rand2-24 (seeds 1000..1024) and rand3-00..rand3-09 (seeds
// 3000..3009).
std::vector<FiniteAlgebra> standard_catalog();
std::optional<FiniteAlgebra> catalog_algebra(std::string_view name);

// Every subuniverse of a as an algebra, in increasing order of the sorted
// element list. Elements are renumbered 0..k-1 in increasing order; names
// are "<name>[e1,e2,...]".
std::vector<FiniteAlgebra> subalgebras(const FiniteAlgebra& a);

// Random term in x1..xn of depth at most `depth` over the store's symbols
// (coefficients excluded). Throws Precondition when there are no leaves.
TermId random_term(TermStore& store, unsigned n, unsigned depth, std::mt19937_64& rng);
// `count` equations with sides from random_term.
std::vector<Equation> random_system(TermStore& store, unsigned n, unsigned depth, std::size_t count,
                                    std::mt19937_64& rng);

}  // namespace ualgeo
