#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ualgeo/algebra.hpp"
#include "ualgeo/budget.hpp"

namespace ualgeo {

// Property suites behind `ualgeo verify`. Each property is checked against
// a brute-force computation over the whole range it reports.

enum class Verdict { Pass, Fail, Skipped };

struct PropertyResult {
    std::string name;
    std::string range;  // quantifier range actually covered
    Verdict verdict = Verdict::Pass;
    std::string detail;  // first counterexample on FAIL, reason on SKIPPED
};

struct SuiteOptions {
    std::optional<unsigned> n;      // largest arity; each suite has a default
    std::optional<unsigned> depth;  // term depth; each suite has a default
    Budget budget;
    std::uint64_t seed = 1;
    std::size_t instances = 20;  // random instances per arity
};

// geometry, lemma1, corollary1, deduction, conditions
const std::vector<std::string>& suite_names();

// Throws a Semantic error for an unknown suite name. Budget errors inside a
// property turn it into SKIPPED.
std::vector<PropertyResult> run_suite(const FiniteAlgebra& a, std::string_view suite, const SuiteOptions& options);

std::string_view verdict_name(Verdict v);

}  // namespace ualgeo
