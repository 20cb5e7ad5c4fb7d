#pragma once

#include <array>
#include <atomic>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ualgeo {

using Element = std::uint8_t;

// Carriers are stored one byte per element.
inline constexpr unsigned kMaxCarrier = 256;

struct SymbolId {
    std::uint32_t value = 0;
    auto operator<=>(const SymbolId&) const = default;
};

struct Symbol {
    std::string name;
    unsigned arity = 0;
    bool operator==(const Symbol&) const = default;
};

// An algebraic language: function symbols with arities, optionally extended
// by one constant @k per element k of a coefficient algebra.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Symbol> symbols, std::string name = {});

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    const Symbol& symbol(SymbolId id) const { return symbols_[id.value]; }
    std::optional<SymbolId> find(std::string_view name) const;

    // Number of coefficient constants @0..@{k-1}; zero when the language has
    // no coefficients.
    unsigned coefficient_count() const { return coefficients_; }
    bool has_coefficients() const { return coefficients_ > 0; }
    Signature with_coefficients(unsigned count) const;

    // Same symbols in the same order (coefficients ignored).
    bool same_symbols(const Signature& other) const { return symbols_ == other.symbols_; }
    bool operator==(const Signature&) const = default;

private:
    std::string name_;
    std::vector<Symbol> symbols_;
    unsigned coefficients_ = 0;
};

// "ops: mul/2, inv/1, e/0"
Signature parse_signature(std::string_view text);
std::string print_signature(const Signature& sig);

// Symbol names must be identifiers that cannot be mistaken for variables.
bool is_valid_symbol_name(std::string_view name);

struct TermId {
    std::uint32_t value = 0;
    auto operator<=>(const TermId&) const = default;
};

enum class TermKind : std::uint8_t { Variable, Apply, Coefficient };

// Hash-consed term DAG. Structurally equal terms share one id. Interning is
// serialized by a mutex; reads never lock because node storage is chunked
// and never relocated, and an id is only observable after its node has been
// published.
class TermStore {
public:
    explicit TermStore(Signature sig);
    TermStore(const TermStore&) = delete;
    TermStore& operator=(const TermStore&) = delete;

    const Signature& signature() const { return signature_; }

    // Variable indices are 0-based; x1 is variable(0).
    TermId variable(unsigned index);
    TermId coefficient(Element value);
    TermId apply(SymbolId symbol, std::span<const TermId> children);
    TermId apply(SymbolId symbol, std::initializer_list<TermId> children) {
        return apply(symbol, std::span<const TermId>(children.begin(), children.size()));
    }

    TermKind kind(TermId t) const { return node(t).kind; }
    unsigned variable_index(TermId t) const { return node(t).payload; }
    SymbolId symbol(TermId t) const { return SymbolId{node(t).payload}; }
    Element coefficient_value(TermId t) const { return static_cast<Element>(node(t).payload); }
    std::span<const TermId> children(TermId t) const;
    // Leaves (variables, coefficients, constant symbols) have depth 0.
    unsigned depth(TermId t) const { return node(t).depth; }
    // One more than the largest variable index occurring in t; 0 if ground.
    unsigned variable_bound(TermId t) const { return node(t).var_bound; }
    std::size_t node_count(TermId t) const;

    std::size_t size() const { return count_.load(std::memory_order_acquire); }

    std::string print(TermId t) const;

private:
    struct Node {
        TermKind kind;
        std::uint32_t payload;
        std::uint32_t first_child;
        std::uint32_t arity;
        std::uint32_t depth;
        std::uint32_t var_bound;
    };

    static constexpr std::size_t kChunkBits = 12;
    static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
    static constexpr std::size_t kMaxChunks = std::size_t{1} << 16;

    const Node& node(TermId t) const {
        return node_chunks_[t.value >> kChunkBits][t.value & (kChunkSize - 1)];
    }
    const TermId& child_slot(std::uint32_t index) const {
        return child_chunks_[index >> kChunkBits][index & (kChunkSize - 1)];
    }
    TermId intern(TermKind kind, std::uint32_t payload, std::span<const TermId> children);

    Signature signature_;
    std::unique_ptr<std::unique_ptr<Node[]>[]> node_chunks_;
    std::unique_ptr<std::unique_ptr<TermId[]>[]> child_chunks_;
    std::atomic<std::size_t> count_{0};
    std::size_t child_count_ = 0;
    std::mutex mutex_;
    std::unordered_map<std::string, TermId> index_;
};

struct Equation {
    TermId lhs;
    TermId rhs;
    bool operator==(const Equation&) const = default;
};

// A finite list of equations, or an eventually periodic family given by a
// finite prefix followed by a non-empty cycle repeated forever.
struct System {
    std::vector<Equation> equations;
    std::vector<Equation> cycle;

    bool is_family() const { return !cycle.empty(); }
    // Prefix plus one pass over the cycle. Repeats add nothing to an
    // intersection of solution sets.
    std::vector<Equation> one_period() const;
};

// Grammar: term := x<k> | @<k> | name | name '(' term (',' term)* ')'.
// Variables are x1..x{nvars}. Coefficients need a signature with
// coefficients and are validated against its coefficient count.
TermId parse_term(std::string_view text, TermStore& store, unsigned nvars);

// "lhs ~ rhs"
Equation parse_equation(std::string_view text, TermStore& store, unsigned nvars);
std::string print_equation(const TermStore& store, const Equation& eq);

// Simultaneous replacement of variable i by binding[i]. Unbound variables
// are left in place.
TermId substitute(TermStore& store, TermId t, std::span<const std::optional<TermId>> binding);
TermId substitute(TermStore& store, TermId t, std::span<const TermId> binding);

}  // namespace ualgeo

template <>
struct std::hash<ualgeo::TermId> {
    std::size_t operator()(ualgeo::TermId t) const noexcept { return std::hash<std::uint32_t>{}(t.value); }
};
