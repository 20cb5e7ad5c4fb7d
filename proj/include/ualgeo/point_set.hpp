#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ualgeo/term.hpp"

namespace ualgeo {

// A subset of A^n as a bit vector over the mixed-radix point order
// (x1 most significant). Bits past the last point are always zero.
class PointSet {
public:
    PointSet() = default;
    PointSet(unsigned m, unsigned n);

    static PointSet full(unsigned m, unsigned n);
    static PointSet empty(unsigned m, unsigned n) { return PointSet(m, n); }

    unsigned carrier() const { return m_; }
    unsigned arity() const { return n_; }
    std::size_t universe() const { return points_; }

    bool contains(std::size_t point) const { return (words_[point >> 6] >> (point & 63)) & 1u; }
    void insert(std::size_t point) { words_[point >> 6] |= std::uint64_t{1} << (point & 63); }
    void erase(std::size_t point) { words_[point >> 6] &= ~(std::uint64_t{1} << (point & 63)); }

    std::size_t count() const;
    bool is_empty() const { return count() == 0; }
    bool is_full() const { return count() == points_; }
    bool subset_of(const PointSet& other) const;
    std::vector<std::size_t> members() const;

    PointSet& operator&=(const PointSet& other);
    PointSet& operator|=(const PointSet& other);
    PointSet& subtract(const PointSet& other);
    PointSet complement() const;

    friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
    friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }

    bool operator==(const PointSet& other) const = default;
    // Lexicographic on the membership string read from point 0 upwards,
    // with a member sorting before a non-member.
    bool lex_less(const PointSet& other) const;

    std::vector<std::uint64_t>& words() { return words_; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    std::size_t hash() const;

private:
    unsigned m_ = 0;
    unsigned n_ = 0;
    std::size_t points_ = 0;
    std::vector<std::uint64_t> words_;
};

// Orders by (size, lexicographic) ascending.
bool size_lex_less(const PointSet& a, const PointSet& b);

// "{(0,0),(1,1)}"; the single point of A^0 prints as "()".
std::string format_tuples(const PointSet& s);
// "n=<n> m=<m> bits=<hex>", bit i of the hex string's integer value is point i.
std::string format_hex(const PointSet& s);
PointSet parse_tuples(const std::string& text, unsigned m, unsigned n);
PointSet parse_hex(const std::string& text);

}  // namespace ualgeo

template <>
struct std::hash<ualgeo::PointSet> {
    std::size_t operator()(const ualgeo::PointSet& s) const noexcept { return s.hash(); }
};
