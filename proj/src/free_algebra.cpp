#include "ualgeo/free_algebra.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>
#include <unordered_map>

#include "ualgeo/error.hpp"

namespace ualgeo {

// ---------------------------------------------------------------- row index

RowIndex::RowIndex(std::size_t width) : width_(width), slots_(16, kEmpty) {}

std::uint64_t RowIndex::hash(const Element* row) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ width_;
    std::size_t i = 0;
    for (; i + 8 <= width_; i += 8) {
        std::uint64_t chunk;
        std::memcpy(&chunk, row + i, 8);
        h = (h ^ chunk) * 0xff51afd7ed558ccdull;
        h ^= h >> 32;
    }
    std::uint64_t tail = 0;
    for (; i < width_; ++i) tail = (tail << 8) | row[i];
    h = (h ^ tail) * 0xc4ceb9fe1a85ec53ull;
    h ^= h >> 29;
    return h;
}

std::optional<std::uint32_t> RowIndex::find(std::span<const Element> row) const {
    if (row.size() != width_) return std::nullopt;
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t s = hash(row.data()) & mask;; s = (s + 1) & mask) {
        const std::uint32_t id = slots_[s];
        if (id == kEmpty) return std::nullopt;
        if (width_ == 0 || std::memcmp(rows_.data() + std::size_t{id} * width_, row.data(), width_) == 0) return id;
    }
}

std::pair<std::uint32_t, bool> RowIndex::insert(std::span<const Element> row) {
    if (row.size() != width_) throw Error(ErrorKind::Semantic, "row width mismatch");
    if ((count_ + 1) * 2 > slots_.size()) grow();
    const std::size_t mask = slots_.size() - 1;
    std::size_t s = hash(row.data()) & mask;
    for (;; s = (s + 1) & mask) {
        const std::uint32_t id = slots_[s];
        if (id == kEmpty) break;
        if (width_ == 0 || std::memcmp(rows_.data() + std::size_t{id} * width_, row.data(), width_) == 0)
            return {id, false};
    }
    const auto id = static_cast<std::uint32_t>(count_++);
    rows_.insert(rows_.end(), row.begin(), row.end());
    slots_[s] = id;
    return {id, true};
}

void RowIndex::grow() {
    std::vector<std::uint32_t> next(slots_.size() * 2, kEmpty);
    const std::size_t mask = next.size() - 1;
    for (std::size_t id = 0; id < count_; ++id) {
        std::size_t s = hash(rows_.data() + id * width_) & mask;
        while (next[s] != kEmpty) s = (s + 1) & mask;
        next[s] = static_cast<std::uint32_t>(id);
    }
    slots_.swap(next);
}

// ---------------------------------------------------------------- chunk codec

namespace {

constexpr std::uint32_t kAbsent = 0xffffffffu;
constexpr std::uint64_t kCodeLimit = std::uint64_t{1} << 22;
constexpr std::size_t kChunkTableLimit = std::size_t{1} << 20;

std::uint64_t saturating_power(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && total > cap / base) return cap + 1;
        total *= base;
    }
    return total;
}

}  // namespace

std::shared_ptr<const ChunkCodec> ChunkCodec::make(const FiniteAlgebra& a, std::size_t points) {
    const unsigned m = a.size();
    const std::uint64_t space = saturating_power(m, points, kCodeLimit);
    if (space > kCodeLimit) return nullptr;
    const Signature& sig = a.signature();
    unsigned max_arity = 1;
    for (const Symbol& s : sig.symbols()) max_arity = std::max(max_arity, s.arity);

    unsigned digits = 0;
    for (unsigned c = 1; c <= std::max<std::size_t>(points, 1); ++c) {
        const std::uint64_t radix = saturating_power(m, c, 256);
        if (radix > 256 || saturating_power(radix, max_arity, kChunkTableLimit) > kChunkTableLimit) break;
        digits = c;
        if (m == 1) break;
    }
    if (digits == 0) return nullptr;

    std::shared_ptr<ChunkCodec> codec(new ChunkCodec());
    codec->m_ = m;
    codec->points_ = points;
    codec->digits_ = digits;
    codec->radix_ = static_cast<unsigned>(saturating_power(m, digits, 256));
    codec->chunks_ = (points + digits - 1) / digits;
    codec->space_ = space;
    codec->last_radix_ =
        codec->chunks_ ? static_cast<unsigned>(saturating_power(m, points - (codec->chunks_ - 1) * digits, 256)) : 1;
    std::uint64_t w = 1;
    for (std::size_t j = 0; j < codec->chunks_; ++j) {
        codec->weight_.push_back(w);
        w *= codec->radix_;
    }

    const unsigned radix = codec->radix_;
    for (std::size_t s = 0; s < sig.size(); ++s) {
        const SymbolId sym{static_cast<std::uint32_t>(s)};
        const unsigned k = sig.symbol(sym).arity;
        codec->arity_.push_back(k);
        if (k == 0) {
            // One entry: a chunk holding the constant at every position.
            const unsigned c = a.table(sym)[0];
            unsigned chunk = 0;
            for (unsigned pos = 0, place = 1; pos < digits; ++pos, place *= m) chunk += c * place;
            codec->tables_.push_back({static_cast<std::uint8_t>(chunk)});
            continue;
        }
        const std::size_t entries = saturating_power(radix, k, kChunkTableLimit);
        std::vector<std::uint8_t> table(entries);
        std::vector<unsigned> u(k);
        std::vector<Element> args(k);
        for (std::size_t idx = 0; idx < entries; ++idx) {
            std::size_t rest = idx;
            for (unsigned i = k; i-- > 0;) {
                u[i] = static_cast<unsigned>(rest % radix);
                rest /= radix;
            }
            unsigned result = 0;
            unsigned place = 1;
            for (unsigned pos = 0; pos < digits; ++pos) {
                for (unsigned i = 0; i < k; ++i) args[i] = static_cast<Element>((u[i] / place) % m);
                result += a.operate(sym, args) * place;
                place *= m;
            }
            table[idx] = static_cast<std::uint8_t>(result);
        }
        codec->tables_.push_back(std::move(table));
    }
    for (const auto& table : codec->tables_) {
        auto last = table;
        for (auto& r : last) r = static_cast<std::uint8_t>(r % codec->last_radix_);
        codec->last_tables_.push_back(std::move(last));
    }
    return codec;
}

std::uint64_t ChunkCodec::encode(std::span<const Element> values, std::uint8_t* chunk_out) const {
    std::uint64_t code = 0;
    for (Element v : values) code = code * m_ + v;
    std::uint64_t rest = code;
    for (std::size_t j = 0; j < chunks_; ++j) {
        chunk_out[j] = static_cast<std::uint8_t>(rest % radix_);
        rest /= radix_;
    }
    return code;
}

void ChunkCodec::decode(std::uint64_t code, Element* values_out) const {
    for (std::size_t i = points_; i-- > 0;) {
        values_out[i] = static_cast<Element>(code % m_);
        code /= m_;
    }
}

std::uint64_t ChunkCodec::apply(SymbolId symbol, const std::uint8_t* const* args, std::uint8_t* chunk_out) const {
    const auto& table = tables_[symbol.value];
    const unsigned k = arity_[symbol.value];
    std::uint64_t code = 0;
    for (std::size_t j = 0; j < chunks_; ++j) {
        std::size_t idx = 0;
        for (unsigned i = 0; i < k; ++i) idx = idx * radix_ + args[i][j];
        unsigned r = table[idx];
        if (j + 1 == chunks_) r %= last_radix_;
        chunk_out[j] = static_cast<std::uint8_t>(r);
        code += r * weight_[j];
    }
    return code;
}

void ChunkCodec::apply_row(SymbolId symbol, const std::uint8_t* a, const std::uint8_t* bs, std::size_t count,
                           std::uint32_t* codes_out) const {
    const std::uint8_t* table = tables_[symbol.value].data();
    const std::size_t c = chunks_;
    if (c == 0) {
        std::fill(codes_out, codes_out + count, 0u);
        return;
    }
    if (c == 1) {
        const std::uint8_t* row = table + std::size_t{a[0]} * radix_;
        for (std::size_t i = 0; i < count; ++i) codes_out[i] = row[bs[i]] % last_radix_;
        return;
    }
    if (c == 2) {
        const std::uint8_t* row0 = table + std::size_t{a[0]} * radix_;
        const std::uint8_t* row1 = table + std::size_t{a[1]} * radix_;
        const auto w1 = static_cast<std::uint32_t>(weight_[1]);
        for (std::size_t i = 0; i < count; ++i)
            codes_out[i] = row0[bs[2 * i]] + (row1[bs[2 * i + 1]] % last_radix_) * w1;
        return;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint8_t* b = bs + i * c;
        std::uint64_t code = 0;
        for (std::size_t j = 0; j < c; ++j) {
            unsigned r = table[std::size_t{a[j]} * radix_ + b[j]];
            if (j + 1 == c) r %= last_radix_;
            code += r * weight_[j];
        }
        codes_out[i] = static_cast<std::uint32_t>(code);
    }
}

namespace {

template <std::size_t C>
void apply_ids_binary(const std::uint8_t* table, const std::uint8_t* last, unsigned radix,
                      const std::uint64_t* weight, const std::uint8_t* chunks, const std::uint32_t* xs,
                      const std::uint32_t* ys, std::size_t count, std::uint64_t* codes_out) {
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint8_t* x = chunks + std::size_t{xs[i]} * C;
        const std::uint8_t* y = chunks + std::size_t{ys[i]} * C;
        std::uint64_t code = last[std::size_t{x[C - 1]} * radix + y[C - 1]] * weight[C - 1];
        for (std::size_t j = 0; j + 1 < C; ++j) code += table[std::size_t{x[j]} * radix + y[j]] * weight[j];
        codes_out[i] = code;
    }
}

}  // namespace

void ChunkCodec::apply_ids(SymbolId symbol, const std::uint8_t* chunks, const std::uint32_t* const* ids,
                           std::size_t count, std::uint64_t* codes_out) const {
    const std::uint8_t* table = tables_[symbol.value].data();
    const std::uint8_t* last = last_tables_[symbol.value].data();
    const unsigned k = arity_[symbol.value];
    const std::size_t c = chunks_;
    if (k == 2 && c >= 1 && c <= 4) {
        auto run = [&](auto fn) { fn(table, last, radix_, weight_.data(), chunks, ids[0], ids[1], count, codes_out); };
        switch (c) {
            case 1: run(apply_ids_binary<1>); break;
            case 2: run(apply_ids_binary<2>); break;
            case 3: run(apply_ids_binary<3>); break;
            default: run(apply_ids_binary<4>); break;
        }
        return;
    }
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t code = 0;
        for (std::size_t j = 0; j < c; ++j) {
            std::size_t idx = 0;
            for (unsigned a = 0; a < k; ++a) idx = idx * radix_ + chunks[std::size_t{ids[a][i]} * c + j];
            code += (j + 1 == c ? last : table)[idx] * weight_[j];
        }
        codes_out[i] = code;
    }
}

struct CodecCache {
    std::mutex mutex;
    std::unordered_map<std::size_t, std::shared_ptr<const ChunkCodec>> by_points;

    std::shared_ptr<const ChunkCodec> get(const FiniteAlgebra& a, std::size_t points) {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = by_points.find(points);
        if (it == by_points.end()) it = by_points.emplace(points, ChunkCodec::make(a, points)).first;
        return it->second;
    }
};

// ---------------------------------------------------------------- closure

namespace {

// m^points saturated at UINT64_MAX, for the "all functions found" test.
std::uint64_t function_count_bound(unsigned m, std::size_t points) {
    return saturating_power(m, points, UINT64_MAX - 1);
}

}  // namespace

std::optional<std::uint32_t> TermFunctionAlgebra::lookup(std::span<const Element> values) const {
    if (values.size() != points()) return std::nullopt;
    if (codec_) {
        std::uint8_t scratch[64];
        std::vector<std::uint8_t> wide;
        std::uint8_t* buf = scratch;
        if (codec_->chunks() > sizeof scratch) {
            wide.resize(codec_->chunks());
            buf = wide.data();
        }
        const std::uint32_t id = by_code_[codec_->encode(values, buf)];
        if (id == kAbsent) return std::nullopt;
        return id;
    }
    return index_.find(values);
}

std::uint32_t TermFunctionAlgebra::insert(std::span<const Element> row, TermId witness, unsigned depth) {
    std::uint32_t id;
    if (codec_) {
        const std::size_t c = codec_->chunks();
        const std::size_t at = chunks_.size();
        chunks_.resize(at + c);
        const std::uint64_t code = codec_->encode(row, chunks_.data() + at);
        id = index_.insert(row).first;
        by_code_[code] = id;
    } else {
        id = index_.insert(row).first;
    }
    witnesses_.push_back(witness);
    depths_.push_back(depth);
    return id;
}

TermFunctionAlgebra TermFunctionAlgebra::build(const FiniteAlgebra& a, std::shared_ptr<TermStore> store, unsigned n,
                                               const Budget& budget, ClosureMethod method) {
    if (!a.signature().same_symbols(store->signature()))
        throw Error(ErrorKind::Semantic, "term language does not match the algebra's signature");
    if (a.signature().coefficient_count() != store->signature().coefficient_count())
        throw Error(ErrorKind::Semantic, "coefficient constants differ between algebra and term language");
    if (n > budget.max_arity)
        throw BudgetError("free algebra arity " + std::to_string(n) + " exceeds the arity budget " +
                              std::to_string(budget.max_arity),
                          0);

    TermFunctionAlgebra f;
    f.base_ = std::make_shared<const FiniteAlgebra>(a);
    f.store_ = std::move(store);
    f.n_ = n;
    const unsigned m = a.size();
    const std::size_t points = point_count(m, n, budget.max_points);
    f.index_ = RowIndex(points);
    f.point_indices_.resize(points);
    for (std::size_t p = 0; p < points; ++p) f.point_indices_[p] = p;

    f.codec_cache_ = std::make_shared<CodecCache>();
    auto codec = f.codec_cache_->get(a, points);
    if (method == ClosureMethod::Auto) method = codec ? ClosureMethod::Codes : ClosureMethod::Rows;
    if (method == ClosureMethod::Codes && !codec)
        throw Error(ErrorKind::Semantic, "code-based closure needs m^(m^n) <= 2^22");
    f.method_ = method;
    if (method == ClosureMethod::Codes) {
        f.codec_ = codec;
        f.by_code_.assign(codec->space(), kAbsent);
    }

    const std::uint64_t all_functions = function_count_bound(m, points);
    TermStore& terms = *f.store_;

    auto add = [&](std::span<const Element> row, TermId witness, unsigned depth) -> std::uint32_t {
        if (f.lookup(row)) return kAbsent;
        if (f.size() >= budget.max_free_elements)
            throw BudgetError("free algebra exceeds " + std::to_string(budget.max_free_elements) + " elements",
                              f.size());
        return f.insert(row, witness, depth);
    };

    // Depth 0: projections, constant symbols, coefficients.
    for (unsigned i = 0; i < n; ++i) {
        const auto row = projection_values(m, n, i);
        const std::uint32_t id = add(row, terms.variable(i), 0);
        f.projections_.push_back(id != kAbsent ? id : *f.lookup(row));
    }
    const Signature& sig = a.signature();
    std::vector<Element> row(points);
    for (std::size_t s = 0; s < sig.size(); ++s) {
        const SymbolId sym{static_cast<std::uint32_t>(s)};
        if (sig.symbol(sym).arity != 0) continue;
        std::fill(row.begin(), row.end(), a.table(sym)[0]);
        add(row, terms.apply(sym, {}), 0);
    }
    for (unsigned c = 0; c < sig.coefficient_count(); ++c) {
        std::fill(row.begin(), row.end(), static_cast<Element>(c));
        add(row, terms.coefficient(static_cast<Element>(c)), 0);
    }

    const std::size_t width = codec ? codec->chunks() : 0;
    std::vector<std::uint8_t> out_chunks(width);
    std::size_t layer_start = 0;
    std::size_t layer_end = f.size();
    std::vector<const Element*> arg_rows;
    std::vector<const std::uint8_t*> arg_chunks;
    std::vector<TermId> arg_terms;
    std::vector<std::uint32_t> row_codes;
    for (unsigned depth = 1; layer_start < layer_end && f.size() < all_functions; ++depth) {
        for (std::size_t s = 0; s < sig.size() && f.size() < all_functions; ++s) {
            const SymbolId sym{static_cast<std::uint32_t>(s)};
            const unsigned k = sig.symbol(sym).arity;
            if (k == 0) continue;
            // Lexicographic tuples over [0, layer_end) with at least one
            // component from the previous layer. Only the last position's
            // range depends on the earlier ones.
            std::vector<std::size_t> odo(k, 0);
            arg_rows.assign(k, nullptr);
            arg_chunks.assign(k, nullptr);
            arg_terms.assign(k, TermId{});
            bool done = false;
            while (!done) {
                bool any_new = false;
                for (unsigned j = 0; j + 1 < k; ++j) any_new |= odo[j] >= layer_start;
                const std::size_t last_begin = any_new ? 0 : layer_start;
                if (f.codec_ && k == 2) {
                    // Codes of the whole row first; inserts only append.
                    row_codes.resize(layer_end - last_begin);
                    f.codec_->apply_row(sym, f.chunks(odo[0]), f.chunks_.data() + last_begin * width,
                                        row_codes.size(), row_codes.data());
                    for (std::size_t i = 0; i < row_codes.size(); ++i) {
                        if (f.by_code_[row_codes[i]] != kAbsent) continue;
                        f.codec_->decode(row_codes[i], row.data());
                        arg_terms[0] = f.witnesses_[odo[0]];
                        arg_terms[1] = f.witnesses_[last_begin + i];
                        add(row, terms.apply(sym, arg_terms), depth);
                        if (f.size() >= all_functions) break;
                    }
                }
                for (std::size_t last = f.codec_ && k == 2 ? layer_end : last_begin; last < layer_end; ++last) {
                    if (f.codec_) {
                        // Element storage can move on insert; take pointers afresh.
                        for (unsigned j = 0; j + 1 < k; ++j) arg_chunks[j] = f.chunks_.data() + odo[j] * width;
                        arg_chunks[k - 1] = f.chunks_.data() + last * width;
                        const std::uint64_t code = f.codec_->apply(sym, arg_chunks.data(), out_chunks.data());
                        if (f.by_code_[code] != kAbsent) continue;
                        f.codec_->decode(code, row.data());
                    } else {
                        for (unsigned j = 0; j + 1 < k; ++j) arg_rows[j] = f.index_.row(odo[j]).data();
                        arg_rows[k - 1] = f.index_.row(last).data();
                        apply_pointwise(a, sym, arg_rows, row.data(), points);
                        if (f.index_.find(row)) continue;
                    }
                    for (unsigned j = 0; j + 1 < k; ++j) arg_terms[j] = f.witnesses_[odo[j]];
                    arg_terms[k - 1] = f.witnesses_[last];
                    add(row, terms.apply(sym, arg_terms), depth);
                    if (f.size() >= all_functions) break;
                }
                if (f.size() >= all_functions) break;
                // advance the first k-1 positions
                unsigned j = k - 1;
                while (j > 0 && ++odo[j - 1] == layer_end) odo[--j] = 0;
                if (j == 0) done = true;
            }
        }
        layer_start = layer_end;
        layer_end = f.size();
    }
    return f;
}

TermFunctionAlgebra TermFunctionAlgebra::restrict(const TermFunctionAlgebra& f, std::span<const std::size_t> points,
                                                  std::vector<std::uint32_t>* quotient_map) {
    if (!f.full_space_) throw Error(ErrorKind::Semantic, "can only restrict functions on the whole space");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i] >= f.points()) throw Error(ErrorKind::Semantic, "restriction point outside A^n");
        if (i && points[i] <= points[i - 1]) throw Error(ErrorKind::Semantic, "restriction points must increase");
    }
    TermFunctionAlgebra g;
    g.base_ = f.base_;
    g.store_ = f.store_;
    g.n_ = f.n_;
    g.point_indices_.assign(points.begin(), points.end());
    g.full_space_ = points.size() == f.points();
    g.index_ = RowIndex(points.size());
    g.codec_cache_ = f.codec_cache_;
    g.codec_ = g.codec_cache_->get(*f.base_, points.size());
    g.method_ = g.codec_ ? ClosureMethod::Codes : ClosureMethod::Rows;
    if (g.codec_) g.by_code_.assign(g.codec_->space(), kAbsent);

    std::vector<std::uint32_t> map(f.size());
    std::vector<Element> row(points.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto values = f.values(i);
        for (std::size_t p = 0; p < points.size(); ++p) row[p] = values[points[p]];
        const auto existing = g.lookup(row);
        map[i] = existing ? *existing : g.insert(row, f.witness(i), f.depth(i));
    }
    for (std::uint32_t p : f.projections_) g.projections_.push_back(map[p]);
    if (quotient_map) *quotient_map = std::move(map);
    return g;
}

std::uint32_t TermFunctionAlgebra::element_of(TermId t) const {
    if (store_->variable_bound(t) > n_)
        throw Error(ErrorKind::Semantic, "term uses variables beyond x" + std::to_string(n_));
    Tabulator tab(*base_, *store_, n_);
    const auto& full = tab.values(t);
    std::optional<std::uint32_t> id;
    if (full_space_) {
        id = lookup(full);
    } else {
        std::vector<Element> row(point_indices_.size());
        for (std::size_t p = 0; p < row.size(); ++p) row[p] = full[point_indices_[p]];
        id = lookup(row);
    }
    if (!id) throw Error(ErrorKind::Semantic, "term function missing from the free algebra");
    return *id;
}

std::uint32_t TermFunctionAlgebra::apply(SymbolId symbol, std::span<const std::uint32_t> args) const {
    if (codec_) {
        const std::size_t width = codec_->chunks();
        const std::uint8_t* ptrs[8];
        std::vector<const std::uint8_t*> wide;
        const std::uint8_t** arg_ptrs = ptrs;
        if (args.size() > 8) {
            wide.resize(args.size());
            arg_ptrs = wide.data();
        }
        for (std::size_t i = 0; i < args.size(); ++i) arg_ptrs[i] = chunks_.data() + std::size_t{args[i]} * width;
        std::uint8_t scratch[64];
        std::vector<std::uint8_t> wide_out;
        std::uint8_t* out = scratch;
        if (width > sizeof scratch) {
            wide_out.resize(width);
            out = wide_out.data();
        }
        const std::uint32_t id = by_code_[codec_->apply(symbol, arg_ptrs, out)];
        if (id == kAbsent) throw Error(ErrorKind::Semantic, "function algebra is not closed under the operation");
        return id;
    }
    std::vector<const Element*> rows;
    rows.reserve(args.size());
    for (std::uint32_t a : args) rows.push_back(index_.row(a).data());
    std::vector<Element> out(points());
    apply_pointwise(*base_, symbol, rows, out.data(), out.size());
    const auto id = index_.find(out);
    if (!id) throw Error(ErrorKind::Semantic, "function algebra is not closed under the operation");
    return *id;
}

bool TermFunctionAlgebra::is_closed() const {
    const Signature& sig = base_->signature();
    std::vector<Element> out(points());
    for (std::size_t s = 0; s < sig.size(); ++s) {
        const SymbolId sym{static_cast<std::uint32_t>(s)};
        const unsigned k = sig.symbol(sym).arity;
        if (k == 0) {
            std::fill(out.begin(), out.end(), base_->table(sym)[0]);
            if (!lookup(out)) return false;
            continue;
        }
        if (size() == 0) continue;
        std::vector<std::size_t> odo(k, 0);
        std::vector<const Element*> rows(k);
        while (true) {
            for (unsigned j = 0; j < k; ++j) rows[j] = index_.row(odo[j]).data();
            apply_pointwise(*base_, sym, rows, out.data(), out.size());
            if (!lookup(out)) return false;
            unsigned j = k;
            while (j > 0 && ++odo[j - 1] == size()) odo[--j] = 0;
            if (j == 0) break;
        }
    }
    return true;
}

// ---------------------------------------------------------------- free generating sets

bool is_relatively_free_generating_set(const FiniteAlgebra& f, std::span<const Element> generator_list) {
    const unsigned size = f.size();
    std::vector<Element> generators;
    for (Element e : generator_list) {
        if (e >= size) throw Error(ErrorKind::Semantic, "generator outside the carrier");
        if (std::find(generators.begin(), generators.end(), e) == generators.end()) generators.push_back(e);
    }
    const std::size_t g = generators.size();

    // Express every element as a term over the generators x1..xg.
    auto store = std::make_shared<TermStore>(f.signature());
    std::vector<std::optional<TermId>> word(size);
    std::vector<Element> order;
    for (std::size_t i = 0; i < g; ++i) {
        if (!word[generators[i]]) {
            word[generators[i]] = store->variable(static_cast<unsigned>(i));
            order.push_back(generators[i]);
        }
    }
    for (std::size_t s = 0; s < f.signature().size(); ++s) {
        const SymbolId sym{static_cast<std::uint32_t>(s)};
        if (f.signature().symbol(sym).arity == 0 && !word[f.table(sym)[0]]) {
            word[f.table(sym)[0]] = store->apply(sym, {});
            order.push_back(f.table(sym)[0]);
        }
    }
    for (unsigned c = 0; c < f.signature().coefficient_count(); ++c) {
        if (!word[c]) {
            word[c] = store->coefficient(static_cast<Element>(c));
            order.push_back(static_cast<Element>(c));
        }
    }
    for (bool grew = true; grew;) {
        grew = false;
        const std::vector<Element> snapshot = order;
        for (std::size_t s = 0; s < f.signature().size(); ++s) {
            const SymbolId sym{static_cast<std::uint32_t>(s)};
            const unsigned k = f.signature().symbol(sym).arity;
            if (k == 0 || snapshot.empty()) continue;
            std::vector<std::size_t> odo(k, 0);
            std::vector<Element> args(k);
            std::vector<TermId> kids(k);
            while (true) {
                for (unsigned j = 0; j < k; ++j) args[j] = snapshot[odo[j]];
                const Element r = f.operate(sym, args);
                if (!word[r]) {
                    for (unsigned j = 0; j < k; ++j) kids[j] = *word[args[j]];
                    word[r] = store->apply(sym, kids);
                    order.push_back(r);
                    grew = true;
                }
                unsigned j = k;
                while (j > 0 && ++odo[j - 1] == snapshot.size()) odo[--j] = 0;
                if (j == 0) break;
            }
        }
    }
    if (order.size() != size)
        throw Error(ErrorKind::Precondition, "the given elements do not generate the algebra");

    // Every map generators -> F, extended along the words, must be a homomorphism.
    std::vector<Element> images(g, 0);
    std::vector<Element> map(size);
    while (true) {
        for (unsigned e = 0; e < size; ++e) map[e] = eval_term(*store, *word[e], f, images);
        for (std::size_t i = 0; i < g; ++i)
            if (map[generators[i]] != images[i]) return false;
        if (!is_homomorphism(map, f, f)) return false;
        std::size_t j = g;
        while (j > 0 && ++images[j - 1] == size) images[--j] = 0;
        if (j == 0) break;
    }
    return true;
}

FiniteAlgebra to_finite_algebra(const TermFunctionAlgebra& f) {
    if (f.size() == 0 || f.size() > kMaxCarrier)
        throw BudgetError("term function algebra too large to convert", f.size());
    const Signature& sig = f.base().signature();
    const auto size = static_cast<unsigned>(f.size());
    std::vector<std::vector<Element>> tables;
    for (std::size_t s = 0; s < sig.size(); ++s) {
        const SymbolId sym{static_cast<std::uint32_t>(s)};
        const unsigned k = sig.symbol(sym).arity;
        const std::size_t entries = point_count(size, k, std::size_t{1} << 26);
        std::vector<Element> table(entries);
        std::vector<std::uint32_t> args(k);
        for (std::size_t e = 0; e < entries; ++e) {
            const auto tuple = decode_point(e, size, k);
            for (unsigned j = 0; j < k; ++j) args[j] = tuple[j];
            table[e] = static_cast<Element>(f.apply(sym, args));
        }
        tables.push_back(std::move(table));
    }
    // Coefficients are elements of F too, but not the elements 0..m-1 of a
    // carrier indexed by F's order; drop them from the converted language.
    std::vector<std::string> names;
    for (std::size_t i = 0; i < f.size(); ++i) names.push_back(f.store().print(f.witness(i)));
    return FiniteAlgebra("F(" + f.base().name() + "," + std::to_string(f.arity()) + ")", sig.with_coefficients(0), size,
                         std::move(tables), std::move(names));
}

}  // namespace ualgeo
