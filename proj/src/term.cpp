#include "ualgeo/term.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <unordered_set>

#include "ualgeo/error.hpp"

namespace ualgeo {

// ---------------------------------------------------------------- signature

Signature::Signature(std::vector<Symbol> symbols, std::string name)
    : name_(std::move(name)), symbols_(std::move(symbols)) {
    std::unordered_set<std::string> seen;
    for (const auto& s : symbols_) {
        if (!is_valid_symbol_name(s.name))
            throw Error(ErrorKind::Semantic, "invalid symbol name '" + s.name + "'");
        if (!seen.insert(s.name).second) throw Error(ErrorKind::Semantic, "duplicate symbol '" + s.name + "'");
    }
}

std::optional<SymbolId> Signature::find(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return SymbolId{static_cast<std::uint32_t>(i)};
    return std::nullopt;
}

Signature Signature::with_coefficients(unsigned count) const {
    Signature out = *this;
    out.coefficients_ = count;
    return out;
}

bool is_valid_symbol_name(std::string_view name) {
    if (name.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    // x followed only by digits is reserved for variables
    if (name.size() > 1 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return false;
    return true;
}

namespace {

class Cursor {
public:
    Cursor(std::string_view text, std::size_t line = 1) : text_(text), line_(line) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string_view word() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }
    // Optional leading minus so "f/-1" reaches the arity check.
    std::optional<long long> integer() {
        skip_space();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        const std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits || pos_ - digits > 9) {
            pos_ = start;
            return std::nullopt;
        }
        return std::stoll(std::string(text_.substr(start, pos_ - start)));
    }
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, pos_ + 1); }
    std::size_t column() const { return pos_ + 1; }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

}  // namespace

Signature parse_signature(std::string_view text) {
    Cursor cur(text);
    if (cur.word() != "ops") cur.fail("expected 'ops:'");
    cur.expect(':');
    std::vector<Symbol> symbols;
    std::unordered_set<std::string> seen;
    if (cur.at_end()) return Signature(std::move(symbols));
    do {
        const std::size_t col = cur.column();
        std::string name(cur.word());
        if (name.empty()) cur.fail("expected symbol name");
        if (!is_valid_symbol_name(name))
            throw Error(ErrorKind::Semantic, "1:" + std::to_string(col) + ": symbol name '" + name +
                                                 "' is reserved for variables");
        cur.expect('/');
        const auto arity = cur.integer();
        if (!arity) cur.fail("expected arity");
        if (*arity < 0) throw Error(ErrorKind::Semantic, "negative arity for symbol '" + name + "'");
        if (!seen.insert(name).second) throw Error(ErrorKind::Semantic, "duplicate symbol '" + name + "'");
        symbols.push_back({name, static_cast<unsigned>(*arity)});
    } while (cur.accept(','));
    if (!cur.at_end()) cur.fail("unexpected trailing input");
    return Signature(std::move(symbols));
}

std::string print_signature(const Signature& sig) {
    std::string out = "ops:";
    for (std::size_t i = 0; i < sig.symbols().size(); ++i) {
        out += i == 0 ? " " : ", ";
        out += sig.symbols()[i].name + "/" + std::to_string(sig.symbols()[i].arity);
    }
    return out;
}

// ---------------------------------------------------------------- store

TermStore::TermStore(Signature sig)
    : signature_(std::move(sig)),
      node_chunks_(std::make_unique<std::unique_ptr<Node[]>[]>(kMaxChunks)),
      child_chunks_(std::make_unique<std::unique_ptr<TermId[]>[]>(kMaxChunks)) {}

TermId TermStore::variable(unsigned index) { return intern(TermKind::Variable, index, {}); }

TermId TermStore::coefficient(Element value) {
    if (value >= signature_.coefficient_count())
        throw Error(ErrorKind::Semantic, "coefficient @" + std::to_string(value) + " is not available");
    return intern(TermKind::Coefficient, value, {});
}

TermId TermStore::apply(SymbolId symbol, std::span<const TermId> children) {
    if (symbol.value >= signature_.size()) throw Error(ErrorKind::Semantic, "unknown symbol id");
    const Symbol& s = signature_.symbol(symbol);
    if (children.size() != s.arity)
        throw Error(ErrorKind::Semantic, "symbol '" + s.name + "' expects " + std::to_string(s.arity) +
                                             " arguments, got " + std::to_string(children.size()));
    return intern(TermKind::Apply, symbol.value, children);
}

std::span<const TermId> TermStore::children(TermId t) const {
    const Node& n = node(t);
    if (n.arity == 0) return {};
    // Children of one node never straddle a chunk boundary.
    return {&child_slot(n.first_child), n.arity};
}

std::size_t TermStore::node_count(TermId t) const {
    std::size_t total = 1;
    for (TermId c : children(t)) total += node_count(c);
    return total;
}

TermId TermStore::intern(TermKind kind, std::uint32_t payload, std::span<const TermId> children) {
    std::string key;
    key.resize(1 + sizeof(std::uint32_t) * (1 + children.size()));
    key[0] = static_cast<char>(kind);
    std::memcpy(key.data() + 1, &payload, sizeof payload);
    for (std::size_t i = 0; i < children.size(); ++i)
        std::memcpy(key.data() + 1 + sizeof(std::uint32_t) * (1 + i), &children[i].value, sizeof(std::uint32_t));

    std::lock_guard lock(mutex_);
    if (auto it = index_.find(key); it != index_.end()) return it->second;

    const std::size_t id = count_.load(std::memory_order_relaxed);
    if (id >= kChunkSize * kMaxChunks) throw Error(ErrorKind::Budget, "term store is full");
    if (children.size() > kChunkSize) throw Error(ErrorKind::Semantic, "arity too large");

    std::uint32_t first_child = 0;
    if (!children.empty()) {
        // keep a node's children contiguous within one chunk
        const std::size_t offset = child_count_ & (kChunkSize - 1);
        if (offset + children.size() > kChunkSize) child_count_ += kChunkSize - offset;
        const std::size_t chunk = child_count_ >> kChunkBits;
        if (chunk >= kMaxChunks) throw Error(ErrorKind::Budget, "term store is full");
        if (!child_chunks_[chunk]) child_chunks_[chunk] = std::make_unique<TermId[]>(kChunkSize);
        first_child = static_cast<std::uint32_t>(child_count_);
        for (std::size_t i = 0; i < children.size(); ++i)
            child_chunks_[chunk][(child_count_ & (kChunkSize - 1)) + i] = children[i];
        child_count_ += children.size();
    }

    Node n{kind, payload, first_child, static_cast<std::uint32_t>(children.size()), 0, 0};
    if (kind == TermKind::Variable) n.var_bound = payload + 1;
    for (TermId c : children) {
        n.depth = std::max(n.depth, node(c).depth + 1);
        n.var_bound = std::max(n.var_bound, node(c).var_bound);
    }

    const std::size_t chunk = id >> kChunkBits;
    if (!node_chunks_[chunk]) node_chunks_[chunk] = std::make_unique<Node[]>(kChunkSize);
    node_chunks_[chunk][id & (kChunkSize - 1)] = n;
    const TermId tid{static_cast<std::uint32_t>(id)};
    index_.emplace(std::move(key), tid);
    count_.store(id + 1, std::memory_order_release);
    return tid;
}

std::string TermStore::print(TermId t) const {
    switch (kind(t)) {
        case TermKind::Variable: return "x" + std::to_string(variable_index(t) + 1);
        case TermKind::Coefficient: return "@" + std::to_string(coefficient_value(t));
        case TermKind::Apply: break;
    }
    std::string out = signature_.symbol(symbol(t)).name;
    const auto kids = children(t);
    if (kids.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) out += ',';
        out += print(kids[i]);
    }
    out += ')';
    return out;
}

std::vector<Equation> System::one_period() const {
    std::vector<Equation> out = equations;
    out.insert(out.end(), cycle.begin(), cycle.end());
    return out;
}

// ---------------------------------------------------------------- parsing

namespace {

TermId parse_term_at(Cursor& cur, TermStore& store, unsigned nvars) {
    const Signature& sig = store.signature();
    if (cur.accept('@')) {
        const std::size_t col = cur.column();
        const auto value = cur.integer();
        if (!value || *value < 0) cur.fail("expected coefficient index after '@'");
        if (!sig.has_coefficients())
            throw Error(ErrorKind::Semantic, "column " + std::to_string(col) +
                                                 ": coefficient used without a coefficient algebra");
        if (*value >= sig.coefficient_count())
            throw Error(ErrorKind::Semantic, "coefficient @" + std::to_string(*value) +
                                                 " is outside the coefficient algebra");
        return store.coefficient(static_cast<Element>(*value));
    }
    const std::size_t col = cur.column();
    const std::string_view name = cur.word();
    if (name.empty()) cur.fail("expected term");
    if (name.size() > 1 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        if (name.size() > 10) throw Error(ErrorKind::Semantic, "variable index out of range: " + std::string(name));
        const long long index = std::stoll(std::string(name.substr(1)));
        if (index < 1 || index > nvars)
            throw Error(ErrorKind::Semantic, "variable " + std::string(name) + " out of range (nvars = " +
                                                 std::to_string(nvars) + ")");
        return store.variable(static_cast<unsigned>(index - 1));
    }
    const auto symbol = sig.find(name);
    if (!symbol)
        throw Error(ErrorKind::Semantic, "column " + std::to_string(col) + ": unknown symbol '" + std::string(name) + "'");
    std::vector<TermId> args;
    if (cur.accept('(')) {
        if (!cur.accept(')')) {
            do args.push_back(parse_term_at(cur, store, nvars));
            while (cur.accept(','));
            cur.expect(')');
        }
    }
    const unsigned arity = sig.symbol(*symbol).arity;
    if (args.size() != arity)
        throw Error(ErrorKind::Semantic, "arity mismatch: '" + std::string(name) + "' expects " +
                                             std::to_string(arity) + " arguments, got " + std::to_string(args.size()));
    return store.apply(*symbol, args);
}

}  // namespace

TermId parse_term(std::string_view text, TermStore& store, unsigned nvars) {
    Cursor cur(text);
    const TermId t = parse_term_at(cur, store, nvars);
    if (!cur.at_end()) cur.fail("unexpected trailing input");
    return t;
}

Equation parse_equation(std::string_view text, TermStore& store, unsigned nvars) {
    Cursor cur(text);
    Equation eq;
    eq.lhs = parse_term_at(cur, store, nvars);
    if (!cur.accept('~')) cur.fail(cur.at_end() ? "expected 'lhs ~ rhs'" : "expected '~'");
    eq.rhs = parse_term_at(cur, store, nvars);
    if (!cur.at_end()) cur.fail(cur.accept('~') ? "more than one '~'" : "unexpected trailing input");
    return eq;
}

std::string print_equation(const TermStore& store, const Equation& eq) {
    return store.print(eq.lhs) + " ~ " + store.print(eq.rhs);
}

// ---------------------------------------------------------------- substitution

namespace {

TermId substitute_rec(TermStore& store, TermId t, std::span<const std::optional<TermId>> binding,
                      std::unordered_map<TermId, TermId>& memo) {
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    TermId out = t;
    switch (store.kind(t)) {
        case TermKind::Variable: {
            const unsigned i = store.variable_index(t);
            if (i < binding.size() && binding[i]) out = *binding[i];
            break;
        }
        case TermKind::Coefficient: break;
        case TermKind::Apply: {
            const auto kids = store.children(t);
            std::vector<TermId> args(kids.begin(), kids.end());
            bool changed = false;
            for (auto& a : args) {
                const TermId s = substitute_rec(store, a, binding, memo);
                changed |= s != a;
                a = s;
            }
            if (changed) out = store.apply(store.symbol(t), args);
            break;
        }
    }
    memo.emplace(t, out);
    return out;
}

}  // namespace

TermId substitute(TermStore& store, TermId t, std::span<const std::optional<TermId>> binding) {
    std::unordered_map<TermId, TermId> memo;
    return substitute_rec(store, t, binding, memo);
}

TermId substitute(TermStore& store, TermId t, std::span<const TermId> binding) {
    std::vector<std::optional<TermId>> full(binding.begin(), binding.end());
    return substitute(store, t, full);
}

}  // namespace ualgeo
