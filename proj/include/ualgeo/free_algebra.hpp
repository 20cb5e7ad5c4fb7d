#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ualgeo/algebra.hpp"
#include "ualgeo/budget.hpp"

namespace ualgeo {

// Deduplicating index over fixed-width byte rows stored back to back.
// Rows are addressed by insertion order.
class RowIndex {
public:
    explicit RowIndex(std::size_t width = 0);

    std::size_t width() const { return width_; }
    std::size_t size() const { return count_; }
    std::span<const Element> row(std::size_t i) const { return {rows_.data() + i * width_, width_}; }

    std::optional<std::uint32_t> find(std::span<const Element> row) const;
    // Returns (index, inserted).
    std::pair<std::uint32_t, bool> insert(std::span<const Element> row);

private:
    static constexpr std::uint32_t kEmpty = 0xffffffffu;
    std::uint64_t hash(const Element* row) const;
    void grow();

    std::size_t width_;
    std::size_t count_ = 0;
    std::vector<Element> rows_;
    std::vector<std::uint32_t> slots_;
};

// Packed form of a function on P points: the mixed-radix code
// sum v[i] * m^(P-1-i), cut into base-M digits ("chunks", M = m^c) so that
// pointwise operations become one table lookup per chunk.
class ChunkCodec {
public:
    // Returns nullptr when m^P exceeds the direct-address limit.
    static std::shared_ptr<const ChunkCodec> make(const FiniteAlgebra& a, std::size_t points);

    std::size_t chunks() const { return chunks_; }
    std::uint64_t space() const { return space_; }

    std::uint64_t encode(std::span<const Element> values, std::uint8_t* chunk_out) const;
    void decode(std::uint64_t code, Element* values_out) const;
    // Applies symbol chunkwise; args[j] points at argument j's chunks.
    std::uint64_t apply(SymbolId symbol, const std::uint8_t* const* args, std::uint8_t* chunk_out) const;
    // Binary symbol with a fixed first argument: codes of a*b for `count`
    // second arguments whose chunks are stored back to back.
    void apply_row(SymbolId symbol, const std::uint8_t* a, const std::uint8_t* bs, std::size_t count,
                   std::uint32_t* codes_out) const;
    // Batched apply on element ids: ids[k][i] is argument k of item i and
    // indexes `chunks`, which holds chunks() bytes per element.
    void apply_ids(SymbolId symbol, const std::uint8_t* chunks, const std::uint32_t* const* ids, std::size_t count,
                   std::uint64_t* codes_out) const;

private:
    ChunkCodec() = default;

    unsigned m_ = 0;
    std::size_t points_ = 0;
    unsigned digits_ = 1;  // carrier digits per chunk
    unsigned radix_ = 1;   // M = m^digits_
    unsigned last_radix_ = 1;
    std::size_t chunks_ = 0;
    std::uint64_t space_ = 0;
    std::vector<std::uint64_t> weight_;
    std::vector<unsigned> arity_;
    std::vector<std::vector<std::uint8_t>> tables_;
    std::vector<std::vector<std::uint8_t>> last_tables_;  // reduced mod last_radix_
};

struct CodecCache;

// How new functions are looked up during closure. Both produce the same
// algebra; Codes packs each function into a mixed-radix integer and uses a
// direct-address table, and is only available when m^(m^n) is small.
enum class ClosureMethod { Auto, Rows, Codes };

// The algebra of n-ary term functions of A, i.e. the subalgebra of
// A^(A^n) generated by the projections. This realizes the relatively free
// algebra of Var(A) on n generators. Elements are discovered breadth-first
// by term depth with a fixed symbol order, so each carries a minimal-depth
// witness term and the element order is deterministic.
//
// The same type also holds restrictions of such an algebra to a subset Y of
// A^n (see restrict); values are then indexed by the positions of Y.
class TermFunctionAlgebra {
public:
    static TermFunctionAlgebra build(const FiniteAlgebra& a, std::shared_ptr<TermStore> store, unsigned n,
                                     const Budget& budget = Budget{}, ClosureMethod method = ClosureMethod::Auto);

    // Restrictions f|_Y of f's elements, deduplicated in order of first
    // occurrence, so each keeps the witness of its first preimage. `points`
    // are increasing indices into A^n. If quotient_map is given it receives
    // the index of each f-element's restriction.
    static TermFunctionAlgebra restrict(const TermFunctionAlgebra& f, std::span<const std::size_t> points,
                                        std::vector<std::uint32_t>* quotient_map = nullptr);

    const FiniteAlgebra& base() const { return *base_; }
    const std::shared_ptr<TermStore>& store_ptr() const { return store_; }
    TermStore& store() const { return *store_; }
    unsigned arity() const { return n_; }
    // Number of points the functions are tabulated on, and which ones.
    std::size_t points() const { return index_.width(); }
    const std::vector<std::size_t>& point_indices() const { return point_indices_; }
    bool on_full_space() const { return full_space_; }
    std::size_t size() const { return index_.size(); }

    std::span<const Element> values(std::size_t i) const { return index_.row(i); }
    TermId witness(std::size_t i) const { return witnesses_[i]; }
    unsigned depth(std::size_t i) const { return depths_[i]; }
    // Elements that are the projections x1..xn, in order. A projection can
    // coincide with another projection only over a one-element carrier.
    const std::vector<std::uint32_t>& projections() const { return projections_; }

    std::optional<std::uint32_t> find(std::span<const Element> values) const { return lookup(values); }
    // Packed access, available when method_used() is Codes.
    const ChunkCodec* codec() const { return codec_.get(); }
    const std::uint8_t* chunks(std::size_t i) const { return chunks_.data() + i * codec_->chunks(); }
    // Element with the given code, or 0xffffffff.
    std::uint32_t by_code(std::uint64_t code) const { return by_code_[code]; }
    // The element denoted by t; t must use variables among x1..xn.
    std::uint32_t element_of(TermId t) const;
    // Pointwise application; the result is always an element (closure).
    std::uint32_t apply(SymbolId symbol, std::span<const std::uint32_t> args) const;
    std::uint32_t apply(SymbolId symbol, std::initializer_list<std::uint32_t> args) const {
        return apply(symbol, std::span<const std::uint32_t>(args.begin(), args.size()));
    }

    ClosureMethod method_used() const { return method_; }

    // Closure idempotence check: applying every operation to every tuple
    // yields an existing element. Exponential in arity; meant for tests.
    bool is_closed() const;

private:
    TermFunctionAlgebra() = default;

    std::uint32_t insert(std::span<const Element> row, TermId witness, unsigned depth);

    std::shared_ptr<const FiniteAlgebra> base_;
    std::shared_ptr<TermStore> store_;
    unsigned n_ = 0;
    std::vector<std::size_t> point_indices_;
    bool full_space_ = true;
    RowIndex index_;
    std::vector<TermId> witnesses_;
    std::vector<unsigned> depths_;
    std::vector<std::uint32_t> projections_;
    ClosureMethod method_ = ClosureMethod::Rows;
    // Codes method: element index by code (kAbsent when absent) and the
    // chunk digits of every element, chunks() bytes each.
    std::shared_ptr<const ChunkCodec> codec_;
    // Codecs by point count, shared with restrictions.
    std::shared_ptr<CodecCache> codec_cache_;
    std::vector<std::uint32_t> by_code_;
    std::vector<std::uint8_t> chunks_;

    std::optional<std::uint32_t> lookup(std::span<const Element> values) const;
};

// True iff every map X -> F extends to an endomorphism of F. Throws
// Precondition when X does not generate F.
bool is_relatively_free_generating_set(const FiniteAlgebra& f, std::span<const Element> generators);

// F as an ordinary finite algebra (only when it has at most kMaxCarrier
// elements); used to feed it back into the algebra-level checks.
FiniteAlgebra to_finite_algebra(const TermFunctionAlgebra& f);

}  // namespace ualgeo
