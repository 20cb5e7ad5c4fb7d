#include "ualgeo/algebra.hpp"

#include <algorithm>

#include "ualgeo/error.hpp"
#include "ualgeo/kernels.hpp"

namespace ualgeo {

std::size_t point_count(unsigned m, unsigned n, std::size_t limit) {
    std::size_t total = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (m != 0 && total > limit / m)
            throw BudgetError(std::to_string(m) + "^" + std::to_string(n) + " points exceed the point budget", total);
        total *= m;
    }
    if (total > limit) throw BudgetError("point count exceeds the point budget", total);
    return total;
}

std::size_t encode_point(std::span<const Element> point, unsigned m) {
    std::size_t index = 0;
    for (Element e : point) index = index * m + e;
    return index;
}

std::vector<Element> decode_point(std::size_t index, unsigned m, unsigned n) {
    std::vector<Element> point(n);
    for (unsigned i = n; i-- > 0;) {
        point[i] = static_cast<Element>(index % m);
        index /= m;
    }
    return point;
}

std::vector<Element> projection_values(unsigned m, unsigned n, unsigned var) {
    const std::size_t count = point_count(m, n, std::numeric_limits<std::size_t>::max());
    std::size_t stride = 1;
    for (unsigned i = var + 1; i < n; ++i) stride *= m;
    std::vector<Element> out(count);
    for (std::size_t p = 0; p < count; ++p) out[p] = static_cast<Element>((p / stride) % m);
    return out;
}

// ---------------------------------------------------------------- algebra

FiniteAlgebra::FiniteAlgebra(std::string name, Signature signature, unsigned size,
                             std::vector<std::vector<Element>> tables, std::vector<std::string> element_names)
    : name_(std::move(name)),
      signature_(std::move(signature)),
      size_(size),
      tables_(std::move(tables)),
      element_names_(std::move(element_names)) {
    if (size_ < 1 || size_ > kMaxCarrier)
        throw Error(ErrorKind::Semantic, "carrier size must be in 1.." + std::to_string(kMaxCarrier));
    if (tables_.size() != signature_.size())
        throw Error(ErrorKind::Semantic, "expected one table per symbol (" + std::to_string(signature_.size()) +
                                             "), got " + std::to_string(tables_.size()));
    for (std::size_t i = 0; i < tables_.size(); ++i) {
        const Symbol& s = signature_.symbols()[i];
        const std::size_t expected = point_count(size_, s.arity, std::size_t{1} << 26);
        if (tables_[i].size() != expected)
            throw Error(ErrorKind::Semantic, "table for '" + s.name + "' has " + std::to_string(tables_[i].size()) +
                                                 " entries, expected " + std::to_string(expected));
        for (Element e : tables_[i])
            if (e >= size_)
                throw Error(ErrorKind::Semantic, "table for '" + s.name + "' has entry " + std::to_string(e) +
                                                     " outside the carrier");
    }
    if (!element_names_.empty() && element_names_.size() != size_)
        throw Error(ErrorKind::Semantic, "element name count does not match carrier size");
    if (signature_.has_coefficients() && signature_.coefficient_count() != size_)
        throw Error(ErrorKind::Semantic, "coefficient constants must name every carrier element");
}

Element FiniteAlgebra::operate(SymbolId symbol, std::span<const Element> args) const {
    return tables_[symbol.value][encode_point(args, size_)];
}

FiniteAlgebra FiniteAlgebra::with_coefficients() const {
    FiniteAlgebra out = *this;
    out.signature_ = signature_.with_coefficients(size_);
    return out;
}

FiniteAlgebra power(const FiniteAlgebra& a, unsigned k) {
    if (k == 0) throw Error(ErrorKind::Semantic, "power exponent must be at least 1");
    const unsigned m = a.size();
    std::size_t size = 1;
    for (unsigned i = 0; i < k; ++i) {
        size *= m;
        if (size > kMaxCarrier) throw BudgetError("power carrier exceeds " + std::to_string(kMaxCarrier) + " elements", size);
    }
    std::vector<std::vector<Element>> tables;
    for (std::size_t s = 0; s < a.signature().size(); ++s) {
        const SymbolId sym{static_cast<std::uint32_t>(s)};
        const unsigned arity = a.signature().symbol(sym).arity;
        const std::size_t entries = point_count(static_cast<unsigned>(size), arity, std::size_t{1} << 26);
        std::vector<Element> table(entries);
        std::vector<Element> args(arity), coords(arity);
        for (std::size_t e = 0; e < entries; ++e) {
            const auto tuple = decode_point(e, static_cast<unsigned>(size), arity);
            std::vector<std::vector<Element>> decoded(arity);
            for (unsigned j = 0; j < arity; ++j) decoded[j] = decode_point(tuple[j], m, k);
            std::vector<Element> result(k);
            for (unsigned c = 0; c < k; ++c) {
                for (unsigned j = 0; j < arity; ++j) args[j] = decoded[j][c];
                result[c] = a.operate(sym, args);
            }
            table[e] = static_cast<Element>(encode_point(result, m));
        }
        tables.push_back(std::move(table));
    }
    Signature sig = a.signature();
    if (sig.has_coefficients()) sig = sig.with_coefficients(0);
    return FiniteAlgebra(a.name() + "^" + std::to_string(k), sig, static_cast<unsigned>(size), std::move(tables));
}

std::vector<Element> subuniverse_closure(const FiniteAlgebra& a, std::span<const Element> seed) {
    const unsigned m = a.size();
    std::vector<bool> in(m, false);
    std::vector<Element> members;
    auto add = [&](Element e) {
        if (!in[e]) {
            in[e] = true;
            members.push_back(e);
        }
    };
    for (Element e : seed) {
        if (e >= m) throw Error(ErrorKind::Semantic, "seed element outside the carrier");
        add(e);
    }
    bool has_constant = a.signature().has_coefficients();
    for (std::size_t s = 0; s < a.signature().size(); ++s) {
        if (a.signature().symbols()[s].arity == 0) {
            add(a.table(SymbolId{static_cast<std::uint32_t>(s)})[0]);
            has_constant = true;
        }
    }
    if (a.signature().has_coefficients())
        for (unsigned e = 0; e < m; ++e) add(static_cast<Element>(e));
    if (members.empty() && !has_constant)
        throw Error(ErrorKind::Semantic, "empty seed over a constant-free signature generates no subuniverse");

    // Re-scan all tuples over the current members until nothing new appears.
    bool grew = true;
    while (grew) {
        grew = false;
        const std::vector<Element> snapshot = members;
        for (std::size_t s = 0; s < a.signature().size(); ++s) {
            const SymbolId sym{static_cast<std::uint32_t>(s)};
            const unsigned arity = a.signature().symbol(sym).arity;
            if (arity == 0) continue;
            std::vector<std::size_t> odo(arity, 0);
            std::vector<Element> args(arity);
            while (true) {
                for (unsigned j = 0; j < arity; ++j) args[j] = snapshot[odo[j]];
                const Element r = a.operate(sym, args);
                if (!in[r]) {
                    add(r);
                    grew = true;
                }
                unsigned j = arity;
                while (j > 0 && ++odo[j - 1] == snapshot.size()) odo[--j] = 0;
                if (j == 0) break;
            }
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

HomomorphismCheck is_homomorphism(std::span<const Element> map, const FiniteAlgebra& source,
                                  const FiniteAlgebra& target) {
    if (!source.signature().same_symbols(target.signature()))
        throw Error(ErrorKind::Semantic, "homomorphism between algebras of different signatures");
    if (map.size() != source.size()) throw Error(ErrorKind::Semantic, "map is not total on the source carrier");
    for (Element e : map)
        if (e >= target.size()) throw Error(ErrorKind::Semantic, "map leaves the target carrier");
    const unsigned m = source.size();
    for (std::size_t s = 0; s < source.signature().size(); ++s) {
        const SymbolId sym{static_cast<std::uint32_t>(s)};
        const unsigned arity = source.signature().symbol(sym).arity;
        const std::size_t tuples = point_count(m, arity, std::size_t{1} << 30);
        std::vector<Element> image(arity);
        for (std::size_t t = 0; t < tuples; ++t) {
            const auto args = decode_point(t, m, arity);
            for (unsigned j = 0; j < arity; ++j) image[j] = map[args[j]];
            if (map[source.operate(sym, args)] != target.operate(sym, image))
                return {false, HomomorphismViolation{sym, args}};
        }
    }
    // Coefficients are constants of the extended language.
    if (source.signature().has_coefficients() && target.signature().has_coefficients()) {
        for (unsigned e = 0; e < std::min(source.size(), target.size()); ++e)
            if (map[e] != e) return {false, std::nullopt};
    }
    return {};
}

// ---------------------------------------------------------------- evaluation

Element eval_term(const TermStore& store, TermId t, const FiniteAlgebra& a, std::span<const Element> point) {
    switch (store.kind(t)) {
        case TermKind::Variable: {
            const unsigned i = store.variable_index(t);
            if (i >= point.size()) throw Error(ErrorKind::Semantic, "point has too few coordinates");
            return point[i];
        }
        case TermKind::Coefficient: return store.coefficient_value(t);
        case TermKind::Apply: break;
    }
    const auto kids = store.children(t);
    Element args[16];
    std::vector<Element> wide;
    Element* buf = args;
    if (kids.size() > 16) {
        wide.resize(kids.size());
        buf = wide.data();
    }
    for (std::size_t i = 0; i < kids.size(); ++i) buf[i] = eval_term(store, kids[i], a, point);
    return a.operate(store.symbol(t), std::span<const Element>(buf, kids.size()));
}

void apply_pointwise(const FiniteAlgebra& a, SymbolId symbol, std::span<const Element* const> args,
                     Element* out, std::size_t count) {
    const auto table = a.table(symbol);
    const unsigned m = a.size();
    const auto& k = simd::kernels();
    switch (args.size()) {
        case 0: std::fill(out, out + count, table[0]); return;
        case 1: k.apply_unary(table.data(), m, args[0], out, count); return;
        case 2: k.apply_binary(table.data(), m, args[0], args[1], out, count); return;
        default: break;
    }
    for (std::size_t p = 0; p < count; ++p) {
        std::size_t index = 0;
        for (const Element* arg : args) index = index * m + arg[p];
        out[p] = table[index];
    }
}

Tabulator::Tabulator(const FiniteAlgebra& a, const TermStore& store, unsigned n)
    : algebra_(a), store_(store), n_(n), points_(point_count(a.size(), n)) {
    if (!a.signature().same_symbols(store.signature()))
        throw Error(ErrorKind::Semantic, "term language does not match the algebra's signature");
}

const std::vector<Element>& Tabulator::values(TermId t) {
    if (auto it = cache_.find(t); it != cache_.end()) return it->second;
    std::vector<Element> out(points_);
    switch (store_.kind(t)) {
        case TermKind::Variable: {
            const unsigned i = store_.variable_index(t);
            if (i >= n_)
                throw Error(ErrorKind::Semantic, "variable x" + std::to_string(i + 1) + " exceeds arity " +
                                                     std::to_string(n_));
            out = projection_values(algebra_.size(), n_, i);
            break;
        }
        case TermKind::Coefficient: {
            const Element c = store_.coefficient_value(t);
            if (c >= algebra_.size()) throw Error(ErrorKind::Semantic, "coefficient outside the carrier");
            std::fill(out.begin(), out.end(), c);
            break;
        }
        case TermKind::Apply: {
            const auto kids = store_.children(t);
            std::vector<const Element*> args;
            args.reserve(kids.size());
            for (TermId c : kids) args.push_back(values(c).data());
            apply_pointwise(algebra_, store_.symbol(t), args, out.data(), points_);
            break;
        }
    }
    return cache_.emplace(t, std::move(out)).first->second;
}

TermFunction term_function(const FiniteAlgebra& a, const TermStore& store, TermId t, unsigned n) {
    if (store.variable_bound(t) > n)
        throw Error(ErrorKind::Semantic, "term uses variables beyond x" + std::to_string(n));
    Tabulator tab(a, store, n);
    return {n, tab.values(t), t};
}

}  // namespace ualgeo
