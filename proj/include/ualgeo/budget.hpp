#pragma once

#include <cstddef>
#include <string>

namespace ualgeo {

struct Budget {
    std::size_t max_free_elements = 20000;
    unsigned max_arity = 4;
    std::size_t max_lattice = 100000;
    std::size_t max_points = std::size_t{1} << 20;
    std::size_t max_universe = 500000;
    // Exhaustive subset enumeration is used up to this many equations.
    std::size_t max_subset_equations = 20;

    // Defaults overridden by UALGEO_BUDGET, if set.
    static Budget from_environment();

    // Accepts either a bare integer (free-algebra element budget) or a comma
    // separated list of key=value with keys free, n, lattice, points,
    // universe, subsets.
    static Budget parse(const std::string& text, Budget base);
    static Budget parse(const std::string& text);
};

}  // namespace ualgeo
