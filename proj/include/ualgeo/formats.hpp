#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ualgeo/algebra.hpp"
#include "ualgeo/term.hpp"

namespace ualgeo {

// Algebra files:
//
//   algebra z2
//   size 2
//   elements 0 1          (optional)
//   ops: mul/2, inv/1, e/0
//   mul: 0 1 1 0
//   inv: 0 1
//   e: 0
//
// '#' starts a comment. Tables may come in any order; printing emits them in
// signature order, one line each, row-major.
FiniteAlgebra parse_algebra(std::string_view text);
std::string print_algebra(const FiniteAlgebra& a);

// System files:
//
//   nvars 2
//   coefficients          (optional: constants @0..@{m-1} of the algebra)
//   mul(x1,x2) ~ e
//   cycle:                (optional: the following equations repeat forever)
//   x1 ~ e
struct SystemHeader {
    unsigned nvars = 0;
    bool coefficients = false;
};

struct SystemFile {
    SystemHeader header;
    System system;
};

SystemHeader parse_system_header(std::string_view text);
// The store's signature must carry coefficients iff the header asks for them.
SystemFile parse_system(std::string_view text, TermStore& store);
std::string print_system(const TermStore& store, const SystemFile& file);

// Whole file contents; throws a Parse error when it cannot be read.
std::string read_file(const std::string& path);

}  // namespace ualgeo
