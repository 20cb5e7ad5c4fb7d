#include "ualgeo/logic.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "ualgeo/error.hpp"
#include "ualgeo/kernels.hpp"

namespace ualgeo {

namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h * 0xff51afd7ed558ccdull;
}

}  // namespace

// ---------------------------------------------------------------------------
// TermUniverse

std::uint64_t TermUniverse::hash(std::uint32_t symbol, std::span<const std::uint32_t> children) const {
    std::uint64_t h = mix(0x51ed270b, symbol);
    for (auto c : children) h = mix(h, c);
    return h;
}

void TermUniverse::index_apply(std::uint32_t i) {
    const std::size_t mask = slots_.size() - 1;
    std::size_t s = hash(store_->symbol(terms_[i]).value, children(i)) & mask;
    while (slots_[s] != kNone) s = (s + 1) & mask;
    slots_[s] = i;
}

std::optional<std::uint32_t> TermUniverse::find_apply(SymbolId symbol, std::span<const std::uint32_t> kids) const {
    if (slots_.empty()) return std::nullopt;
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t s = hash(symbol.value, kids) & mask; slots_[s] != kNone; s = (s + 1) & mask) {
        const std::uint32_t i = slots_[s];
        if (store_->symbol(terms_[i]) != symbol) continue;
        const auto c = children(i);
        if (std::equal(c.begin(), c.end(), kids.begin(), kids.end())) return i;
    }
    return std::nullopt;
}

std::optional<std::uint32_t> TermUniverse::index_of(TermId t) const {
    if (t.value >= by_term_.size() || by_term_[t.value] == 0) return std::nullopt;
    return by_term_[t.value] - 1;
}

TermUniverse TermUniverse::build(TermStore& store, unsigned n, unsigned depth, const Budget& budget) {
    TermUniverse u;
    u.store_ = &store;
    u.n_ = n;
    u.depth_ = depth;
    u.child_begin_.push_back(0);
    const Signature& sig = store.signature();

    auto add = [&](TermId t, std::span<const std::uint32_t> kids) {
        if (u.terms_.size() >= budget.max_universe)
            throw BudgetError("term universe exceeds " + std::to_string(budget.max_universe) + " terms",
                              u.terms_.size());
        u.terms_.push_back(t);
        u.child_index_.insert(u.child_index_.end(), kids.begin(), kids.end());
        u.child_begin_.push_back(static_cast<std::uint32_t>(u.child_index_.size()));
    };

    for (unsigned i = 0; i < n; ++i) add(store.variable(i), {});
    for (std::uint32_t s = 0; s < sig.size(); ++s)
        if (sig.symbols()[s].arity == 0) add(store.apply(SymbolId{s}, {}), {});
    for (unsigned k = 0; k < sig.coefficient_count(); ++k) add(store.coefficient(static_cast<Element>(k)), {});
    u.level_end_.push_back(u.terms_.size());

    std::vector<std::uint32_t> idx;
    std::vector<TermId> args;
    for (unsigned level = 1; level <= depth; ++level) {
        const std::uint32_t lo = level == 1 ? 0 : static_cast<std::uint32_t>(u.level_end_[level - 2]);
        const std::uint32_t hi = static_cast<std::uint32_t>(u.level_end_[level - 1]);
        for (std::uint32_t s = 0; s < sig.size(); ++s) {
            const unsigned r = sig.symbols()[s].arity;
            if (r == 0 || hi == 0) continue;
            idx.assign(r, 0);
            args.resize(r);
            while (true) {
                // At least one child must have depth level-1.
                if (level == 1 || std::any_of(idx.begin(), idx.end(), [&](std::uint32_t c) { return c >= lo; })) {
                    for (unsigned j = 0; j < r; ++j) args[j] = u.terms_[idx[j]];
                    add(store.apply(SymbolId{s}, args), idx);
                }
                unsigned j = r;
                while (j > 0 && ++idx[j - 1] == hi) idx[--j] = 0;
                if (j == 0) break;
            }
        }
        u.level_end_.push_back(u.terms_.size());
    }

    std::size_t cap = 16;
    while (cap < 2 * u.terms_.size()) cap <<= 1;
    u.slots_.assign(cap, kNone);
    u.by_term_.assign(store.size(), 0);
    for (std::uint32_t i = 0; i < u.terms_.size(); ++i) {
        u.by_term_[u.terms_[i].value] = i + 1;
        if (store.kind(u.terms_[i]) == TermKind::Apply) u.index_apply(i);
    }
    return u;
}

// ---------------------------------------------------------------------------
// Proofs

namespace {

void format_rec(const TermStore& store, const Proof& p, unsigned indent, std::vector<std::string>& lines,
                std::size_t max_lines) {
    if (lines.size() >= max_lines) return;
    std::string line(indent * 2, ' ');
    const TermId l = p.reversed ? p.rhs : p.lhs;
    const TermId r = p.reversed ? p.lhs : p.rhs;
    line += store.print(l) + " ~ " + store.print(r) + "  [";
    switch (p.rule) {
        case Rule::Axiom: line += "axiom " + std::to_string(p.axiom + 1); break;
        case Rule::Reflexivity: line += "refl"; break;
        case Rule::Transitivity: line += "trans"; break;
        case Rule::Congruence: line += "cong " + store.signature().symbol(store.symbol(p.lhs)).name; break;
        case Rule::Substitution: {
            line += "subst";
            for (std::size_t i = 0; i < p.substitution.size(); ++i) {
                if (store.kind(p.substitution[i]) == TermKind::Variable &&
                    store.variable_index(p.substitution[i]) == i)
                    continue;
                line += " x" + std::to_string(i + 1) + ":=" + store.print(p.substitution[i]);
            }
            break;
        }
        case Rule::Omitted: line += "omitted"; break;
    }
    if (p.reversed) line += ", sym";
    line += "]";
    lines.push_back(std::move(line));
    for (const auto& q : p.premises) format_rec(store, q, indent + 1, lines, max_lines);
}

}  // namespace

std::string format_proof(const TermStore& store, const Proof& proof, std::size_t max_lines) {
    std::vector<std::string> lines;
    format_rec(store, proof, 0, lines, max_lines);
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    if (lines.size() >= max_lines) out += "...\n";
    return out;
}

// ---------------------------------------------------------------------------
// GroundCongruence

GroundCongruence::GroundCongruence(const TermUniverse& universe)
    : universe_(&universe),
      parent_(universe.size()),
      size_(universe.size(), 1),
      uses_(universe.size()),
      classes_(universe.size()),
      proof_parent_(universe.size(), kNone),
      proof_edge_(universe.size(), 0) {
    std::iota(parent_.begin(), parent_.end(), 0u);
    for (std::uint32_t i = 0; i < universe.size(); ++i) {
        const auto kids = universe.children(i);
        if (kids.empty()) continue;
        for (auto c : kids)
            if (uses_[c].empty() || uses_[c].back() != i) uses_[c].push_back(i);
        signatures_[signature_hash(i)].push_back(i);
    }
}

std::uint32_t GroundCongruence::find(std::uint32_t i) const {
    while (parent_[i] != i) i = parent_[i];
    return i;
}

bool GroundCongruence::same(TermId a, TermId b) const {
    const auto ia = universe_->index_of(a);
    const auto ib = universe_->index_of(b);
    if (!ia || !ib) return a == b;
    return find(*ia) == find(*ib);
}

std::uint64_t GroundCongruence::signature_hash(std::uint32_t node) const {
    std::uint64_t h = mix(0x7f4a7c15, universe_->store().symbol(universe_->term(node)).value);
    for (auto c : universe_->children(node)) h = mix(h, find(c));
    return h;
}

bool GroundCongruence::same_signature(std::uint32_t x, std::uint32_t y) const {
    const TermStore& store = universe_->store();
    if (store.symbol(universe_->term(x)) != store.symbol(universe_->term(y))) return false;
    const auto a = universe_->children(x);
    const auto b = universe_->children(y);
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (find(a[i]) != find(b[i])) return false;
    return true;
}

void GroundCongruence::reroot(std::uint32_t node) {
    std::uint32_t prev = kNone;
    std::size_t prev_edge = 0;
    std::uint32_t cur = node;
    while (cur != kNone) {
        const std::uint32_t next = proof_parent_[cur];
        const std::size_t e = proof_edge_[cur];
        proof_parent_[cur] = prev;
        proof_edge_[cur] = prev_edge;
        prev = cur;
        prev_edge = e;
        cur = next;
    }
}

std::size_t GroundCongruence::process(std::vector<Pending> work) {
    std::size_t merges = 0;
    while (!work.empty()) {
        Pending w = work.back();
        work.pop_back();
        std::uint32_t ra = find(w.a), rb = find(w.b);
        if (ra == rb) continue;
        std::uint32_t a = w.a, b = w.b;
        if (size_[ra] < size_[rb]) {
            std::swap(ra, rb);
            std::swap(a, b);
        }
        reroot(b);
        proof_parent_[b] = a;
        proof_edge_[b] = w.edge;
        parent_[rb] = ra;
        size_[ra] += size_[rb];
        --classes_;
        ++merges;

        for (std::uint32_t u : uses_[rb]) {
            auto& bucket = signatures_[signature_hash(u)];
            std::uint32_t match = kNone;
            for (std::uint32_t v : bucket)
                if (v != u && same_signature(u, v)) {
                    match = v;
                    break;
                }
            if (match == kNone) {
                bucket.push_back(u);
            } else if (find(match) != find(u)) {
                edges_.emplace_back(u, match, Rule::Congruence);
                work.push_back(Pending{u, match, edges_.size() - 1});
            }
        }
        auto moved = std::move(uses_[rb]);
        uses_[rb].clear();
        uses_[ra].insert(uses_[ra].end(), moved.begin(), moved.end());
    }
    return merges;
}

std::size_t GroundCongruence::merge_axiom(std::uint32_t a, std::uint32_t b, std::size_t axiom) {
    if (find(a) == find(b)) return 0;
    Edge e(a, b, Rule::Axiom);
    e.axiom = axiom;
    edges_.push_back(std::move(e));
    return process({Pending{a, b, edges_.size() - 1}});
}

std::size_t GroundCongruence::merge_substitution(std::uint32_t a, std::uint32_t b, std::uint32_t premise_lhs,
                                                 std::uint32_t premise_rhs, std::vector<TermId> substitution) {
    if (find(a) == find(b)) return 0;
    Edge e(a, b, Rule::Substitution);
    e.p = premise_lhs;
    e.q = premise_rhs;
    e.substitution = std::move(substitution);
    edges_.push_back(std::move(e));
    return process({Pending{a, b, edges_.size() - 1}});
}

std::vector<std::vector<std::uint32_t>> GroundCongruence::nontrivial_classes() const {
    std::vector<std::uint32_t> slot(parent_.size(), kNone);
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint32_t i = 0; i < parent_.size(); ++i) {
        const std::uint32_t r = find(i);
        if (size_[r] < 2) continue;
        if (slot[r] == kNone) {
            slot[r] = static_cast<std::uint32_t>(out.size());
            out.emplace_back();
        }
        out[slot[r]].push_back(i);
    }
    return out;
}

std::size_t GroundCongruence::nontrivial_pairs() const {
    std::size_t total = 0;
    for (std::uint32_t i = 0; i < parent_.size(); ++i)
        if (parent_[i] == i) total += std::size_t{size_[i]} * (size_[i] - 1) / 2;
    return total;
}

Proof GroundCongruence::explain_edge(std::size_t edge, bool reversed, std::size_t& budget) const {
    const Edge& e = edges_[edge];
    Proof p;
    p.rule = e.rule;
    p.lhs = universe_->term(e.a);
    p.rhs = universe_->term(e.b);
    p.reversed = reversed;
    if (budget == 0) {
        p.rule = Rule::Omitted;
        return p;
    }
    --budget;
    switch (e.rule) {
        case Rule::Axiom: p.axiom = e.axiom; break;
        case Rule::Congruence: {
            const auto a = universe_->children(e.a);
            const auto b = universe_->children(e.b);
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i] != b[i]) p.premises.push_back(explain_indices(a[i], b[i], budget));
            break;
        }
        case Rule::Substitution:
            p.substitution = e.substitution;
            p.premises.push_back(explain_indices(e.p, e.q, budget));
            break;
        default: break;
    }
    return p;
}

Proof GroundCongruence::explain_indices(std::uint32_t a, std::uint32_t b, std::size_t& budget) const {
    Proof p;
    p.lhs = universe_->term(a);
    p.rhs = universe_->term(b);
    if (a == b) return p;
    // Nearest common ancestor in the proof forest.
    std::vector<std::uint32_t> up_a{a}, up_b{b};
    for (std::uint32_t x = a; proof_parent_[x] != kNone;) up_a.push_back(x = proof_parent_[x]);
    for (std::uint32_t x = b; proof_parent_[x] != kNone;) up_b.push_back(x = proof_parent_[x]);
    while (up_a.size() > 1 && up_b.size() > 1 && up_a[up_a.size() - 2] == up_b[up_b.size() - 2]) {
        up_a.pop_back();
        up_b.pop_back();
    }
    std::vector<Proof> links;
    for (std::size_t i = 0; i + 1 < up_a.size(); ++i) {
        const std::uint32_t x = up_a[i];
        links.push_back(explain_edge(proof_edge_[x], edges_[proof_edge_[x]].a != x, budget));
    }
    for (std::size_t i = up_b.size() - 1; i-- > 0;) {
        const std::uint32_t x = up_b[i];
        // Walking down from the ancestor towards b: parent -> x.
        links.push_back(explain_edge(proof_edge_[x], edges_[proof_edge_[x]].b != x, budget));
    }
    if (links.size() == 1) return std::move(links.front());
    p.rule = Rule::Transitivity;
    p.premises = std::move(links);
    return p;
}

std::optional<Proof> GroundCongruence::explain(TermId a, TermId b) const {
    const auto ia = universe_->index_of(a);
    const auto ib = universe_->index_of(b);
    if (!ia || !ib || find(*ia) != find(*ib)) return std::nullopt;
    std::size_t budget = 100000;
    return explain_indices(*ia, *ib, budget);
}

GroundCongruence congruence_closure(std::span<const Equation> system, const TermUniverse& universe) {
    GroundCongruence g(universe);
    for (std::size_t k = 0; k < system.size(); ++k) {
        const auto a = universe.index_of(system[k].lhs);
        const auto b = universe.index_of(system[k].rhs);
        if (!a || !b)
            throw Error(ErrorKind::Precondition, "equation " + std::to_string(k + 1) + " (" +
                                                     print_equation(universe.store(), system[k]) +
                                                     ") is outside the term universe");
        g.merge_axiom(*a, *b, k);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Deductive closure

namespace {

// Substitution instances of one universe term: every sigma on its variables
// whose image stays in the universe, with the instance's index.
struct Instances {
    std::uint64_t vars = 0;                 // bit i: x_{i+1} occurs
    std::vector<unsigned> var_list;          // occurring variables, increasing
    std::vector<std::uint32_t> sigma;        // var_list.size() entries per record
    std::vector<std::uint32_t> result;       // instance index per record
};

void occurrence_depths(const TermUniverse& u, std::uint32_t t, unsigned depth, std::vector<unsigned>& max_depth,
                       std::uint64_t& vars) {
    const TermStore& store = u.store();
    const TermId id = u.term(t);
    if (store.kind(id) == TermKind::Variable) {
        const unsigned v = store.variable_index(id);
        vars |= std::uint64_t{1} << v;
        max_depth[v] = std::max(max_depth[v], depth);
        return;
    }
    for (auto c : u.children(t)) occurrence_depths(u, c, depth + 1, max_depth, vars);
}

std::uint32_t instantiate(const TermUniverse& u, std::uint32_t t, const std::vector<std::uint32_t>& full_sigma,
                          std::vector<std::uint32_t>& scratch) {
    const TermStore& store = u.store();
    const TermId id = u.term(t);
    switch (store.kind(id)) {
        case TermKind::Variable: return full_sigma[store.variable_index(id)];
        case TermKind::Coefficient: return t;
        case TermKind::Apply: break;
    }
    const auto kids = u.children(t);
    if (kids.empty()) return t;
    std::vector<std::uint32_t> args(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) args[i] = instantiate(u, kids[i], full_sigma, scratch);
    const auto r = u.find_apply(store.symbol(id), args);
    // Depth bounds on sigma keep every instance inside the universe.
    if (!r) throw Error(ErrorKind::Semantic, "internal: instance left the term universe");
    return *r;
}

Instances make_instances(const TermUniverse& u, std::uint32_t t) {
    Instances in;
    const unsigned n = u.arity();
    std::vector<unsigned> max_depth(n, 0);
    occurrence_depths(u, t, 0, max_depth, in.vars);
    for (unsigned v = 0; v < n; ++v)
        if (in.vars >> v & 1) in.var_list.push_back(v);
    const std::size_t k = in.var_list.size();
    std::vector<std::uint32_t> limit(k);
    for (std::size_t i = 0; i < k; ++i)
        limit[i] = static_cast<std::uint32_t>(u.level_end(u.depth_bound() - max_depth[in.var_list[i]]));
    std::vector<std::uint32_t> full(n), scratch, idx(k, 0);
    for (unsigned v = 0; v < n; ++v) full[v] = v;  // variables are the first n universe terms
    while (true) {
        for (std::size_t i = 0; i < k; ++i) full[in.var_list[i]] = idx[i];
        in.sigma.insert(in.sigma.end(), idx.begin(), idx.end());
        in.result.push_back(instantiate(u, t, full, scratch));
        std::size_t j = k;
        while (j > 0 && ++idx[j - 1] == limit[j - 1]) idx[--j] = 0;
        if (j == 0) break;
    }
    return in;
}

}  // namespace

DeductiveClosure deductive_closure(std::span<const Equation> sigma, std::shared_ptr<const TermUniverse> universe) {
    DeductiveClosure out;
    out.universe = universe;
    const TermUniverse& u = *universe;
    const TermStore& store = u.store();
    const unsigned n = u.arity();
    if (n > 64) throw Error(ErrorKind::Budget, "deductive closure supports at most 64 variables");
    out.congruence = std::make_unique<GroundCongruence>(u);
    GroundCongruence& g = *out.congruence;

    for (std::size_t k = 0; k < sigma.size(); ++k) {
        const auto& eq = sigma[k];
        if (std::max(store.variable_bound(eq.lhs), store.variable_bound(eq.rhs)) > n)
            throw Error(ErrorKind::Semantic,
                        "identity " + std::to_string(k + 1) + " uses variables beyond x" + std::to_string(n));
        const auto a = u.index_of(eq.lhs);
        const auto b = u.index_of(eq.rhs);
        if (!a || !b) {
            ++out.skipped_axioms;
            continue;
        }
        g.merge_axiom(*a, *b, k);
    }

    std::unordered_map<std::uint32_t, Instances> cache;
    auto instances = [&](std::uint32_t t) -> const Instances& {
        auto it = cache.find(t);
        if (it == cache.end()) it = cache.emplace(t, make_instances(u, t)).first;
        return it->second;
    };
    auto to_terms = [&](const std::vector<std::uint32_t>& full) {
        std::vector<TermId> s(n);
        for (unsigned v = 0; v < n; ++v) s[v] = u.term(full[v]);
        return s;
    };

    // Key of a record restricted to the variables in `w`.
    auto key_of = [&](const Instances& in, std::size_t r, std::uint64_t w) {
        std::uint64_t h = 0x2545f491;
        const std::size_t k = in.var_list.size();
        for (std::size_t i = 0; i < k; ++i)
            if (w >> in.var_list[i] & 1) h = mix(h, in.sigma[r * k + i]);
        return h;
    };
    auto restricted = [&](const Instances& in, std::size_t r, std::uint64_t w) {
        std::vector<std::uint32_t> s;
        const std::size_t k = in.var_list.size();
        for (std::size_t i = 0; i < k; ++i)
            if (w >> in.var_list[i] & 1) s.push_back(in.sigma[r * k + i]);
        return s;
    };
    auto full_sigma = [&](const Instances& a, std::size_t ra, const Instances& b, std::size_t rb) {
        std::vector<std::uint32_t> full(n);
        for (unsigned v = 0; v < n; ++v) full[v] = v;
        for (std::size_t i = 0; i < a.var_list.size(); ++i) full[a.var_list[i]] = a.sigma[ra * a.var_list.size() + i];
        for (std::size_t i = 0; i < b.var_list.size(); ++i) full[b.var_list[i]] = b.sigma[rb * b.var_list.size() + i];
        return full;
    };

    struct Record {
        std::uint32_t term;
        std::uint32_t record;
    };

    while (true) {
        ++out.rounds;
        std::size_t merges = 0;
        for (const auto& cls : g.nontrivial_classes()) {
            // Members grouped by variable set, groups in order of first member.
            std::vector<std::uint64_t> group_vars;
            std::vector<std::vector<std::uint32_t>> groups;
            for (auto t : cls) {
                const std::uint64_t v = instances(t).vars;
                auto it = std::find(group_vars.begin(), group_vars.end(), v);
                if (it == group_vars.end()) {
                    group_vars.push_back(v);
                    groups.push_back({t});
                } else {
                    groups[it - group_vars.begin()].push_back(t);
                }
            }
            for (std::size_t g1 = 0; g1 < groups.size(); ++g1) {
                for (std::size_t g2 = g1; g2 < groups.size(); ++g2) {
                    if (g1 == g2 && groups[g1].size() < 2) continue;
                    const std::uint64_t w = group_vars[g1] & group_vars[g2];
                    // Buckets of records by sigma restricted to w, per side.
                    std::unordered_map<std::uint64_t, std::vector<std::pair<std::vector<std::uint32_t>,
                                                                            std::array<std::vector<Record>, 2>>>>
                        buckets;
                    auto add_side = [&](std::size_t grp, int side) {
                        for (auto t : groups[grp]) {
                            const Instances& in = instances(t);
                            for (std::uint32_t r = 0; r < in.result.size(); ++r) {
                                auto& chain = buckets[key_of(in, r, w)];
                                auto key = restricted(in, r, w);
                                auto it = std::find_if(chain.begin(), chain.end(),
                                                       [&](const auto& e) { return e.first == key; });
                                if (it == chain.end()) {
                                    chain.emplace_back(std::move(key), std::array<std::vector<Record>, 2>{});
                                    it = chain.end() - 1;
                                }
                                it->second[side].push_back(Record{t, r});
                            }
                        }
                    };
                    add_side(g1, 0);
                    if (g1 != g2) add_side(g2, 1);
                    auto link = [&](const Record& x, const Record& y) {
                        const Instances& ix = instances(x.term);
                        const Instances& iy = instances(y.term);
                        const std::uint32_t a = ix.result[x.record];
                        const std::uint32_t b = iy.result[y.record];
                        if (g.find(a) == g.find(b)) return;
                        merges += g.merge_substitution(a, b, x.term, y.term,
                                                       to_terms(full_sigma(ix, x.record, iy, y.record)));
                    };
                    for (auto& [hash, chain] : buckets) {
                        for (auto& [key, sides] : chain) {
                            if (g1 == g2) {
                                for (std::size_t i = 1; i < sides[0].size(); ++i) link(sides[0][0], sides[0][i]);
                            } else if (!sides[0].empty() && !sides[1].empty()) {
                                for (const auto& x : sides[0]) link(x, sides[1][0]);
                                for (std::size_t i = 1; i < sides[1].size(); ++i) link(sides[0][0], sides[1][i]);
                            }
                        }
                    }
                }
            }
        }
        if (merges == 0) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Identities

IdentitySet IdentitySet::build(const FiniteAlgebra& a, std::shared_ptr<TermStore> store, unsigned n,
                               const Budget& budget) {
    IdentitySet s;
    s.f_ = std::make_shared<TermFunctionAlgebra>(TermFunctionAlgebra::build(a, std::move(store), n, budget));
    std::vector<std::uint32_t> diagonal(s.f_->size());
    std::iota(diagonal.begin(), diagonal.end(), 0u);
    s.radical_ = RadicalIdeal(std::move(diagonal));
    return s;
}

Lemma1Report verify_lemma1(const FiniteAlgebra& a, std::shared_ptr<TermStore> store, unsigned n, unsigned d,
                           const Budget& budget) {
    Lemma1Report rep;
    const auto f = TermFunctionAlgebra::build(a, store, n, budget);
    const auto u = TermUniverse::build(*store, n, d, budget);
    rep.terms = u.size();
    const std::size_t points = point_count(a.size(), n, budget.max_points);

    // Direct evaluation, one point at a time.
    std::map<std::vector<Element>, std::uint32_t> by_table;
    std::vector<std::uint32_t> table_id(u.size()), element(u.size());
    std::vector<Element> values(points);
    for (std::uint32_t i = 0; i < u.size(); ++i) {
        for (std::size_t p = 0; p < points; ++p)
            values[p] = eval_term(*store, u.term(i), a, decode_point(p, a.size(), n));
        table_id[i] = by_table.emplace(values, static_cast<std::uint32_t>(by_table.size())).first->second;
        element[i] = f.element_of(u.term(i));
    }

    // Pair counts per relation and per joint cell.
    std::map<std::uint32_t, std::size_t> by_element, by_tab;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> joint;
    for (std::uint32_t i = 0; i < u.size(); ++i) {
        ++by_element[element[i]];
        ++by_tab[table_id[i]];
        ++joint[{element[i], table_id[i]}];
    }
    auto pairs = [](std::size_t k) { return k * (k - 1) / 2; };
    std::size_t same_element = 0, same_tab = 0, both = 0;
    for (auto& [k, c] : by_element) same_element += pairs(c);
    for (auto& [k, c] : by_tab) same_tab += pairs(c);
    for (auto& [k, c] : joint) both += pairs(c);
    rep.pairs = pairs(u.size());
    rep.identities = same_tab;
    rep.mismatches = same_element + same_tab - 2 * both;
    if (rep.mismatches) {
        for (std::uint32_t i = 0; i < u.size() && !rep.first_mismatch; ++i)
            for (std::uint32_t j = i + 1; j < u.size(); ++j)
                if ((element[i] == element[j]) != (table_id[i] == table_id[j])) {
                    rep.first_mismatch = Equation{u.term(i), u.term(j)};
                    break;
                }
    }
    return rep;
}

Corollary1Report verify_corollary1(const FiniteAlgebra& a, std::shared_ptr<TermStore> store, unsigned n_eq,
                                   unsigned n_free, unsigned d, const Budget& budget, std::uint64_t literal_budget) {
    Corollary1Report rep;
    const auto f = TermFunctionAlgebra::build(a, store, n_free, budget);
    const auto u = TermUniverse::build(*store, n_eq, d, budget);
    const std::size_t terms = u.size();
    rep.free_size = f.size();
    rep.terms = terms;
    rep.equations = terms * (terms + 1) / 2;
    if (n_eq > 64) throw Error(ErrorKind::Budget, "at most 64 equation variables");

    std::uint64_t tuples = 1;
    for (unsigned i = 0; i < n_eq; ++i) {
        tuples *= f.size();
        if (tuples > (std::uint64_t{1} << 40)) break;
    }
    rep.tuples = tuples;
    if (tuples * terms > std::uint64_t{budget.max_universe} * 4096) {
        rep.skipped = true;
        return rep;
    }
    rep.literal = tuples * terms <= literal_budget;

    const unsigned m = a.size();
    const std::size_t points = f.points();
    Tabulator tab(a, *store, n_eq);
    std::vector<const std::vector<Element>*> table(terms);
    for (std::size_t i = 0; i < terms; ++i) table[i] = &tab.values(u.term(i));

    // Variables each term depends on.
    std::vector<std::uint64_t> vars(terms, 0);
    for (std::uint32_t i = 0; i < terms; ++i) {
        if (i < n_eq) vars[i] = std::uint64_t{1} << i;
        for (auto c : u.children(i)) vars[i] |= vars[c];
    }
    // Flattened children and head symbols, so the loop below avoids the store.
    std::vector<std::uint32_t> kid_begin(terms + 1, 0), kid_index;
    std::vector<SymbolId> symbol(terms, SymbolId{0});
    std::size_t max_arity = 1;
    for (std::uint32_t i = 0; i < terms; ++i) {
        kid_begin[i] = static_cast<std::uint32_t>(kid_index.size());
        const auto kids = u.children(i);
        kid_index.insert(kid_index.end(), kids.begin(), kids.end());
        max_arity = std::max(max_arity, kids.size());
        if (i >= n_eq) symbol[i] = store->symbol(u.term(i));
    }
    kid_begin[terms] = static_cast<std::uint32_t>(kid_index.size());
    std::vector<std::uint32_t> constant(terms, kNone);
    for (std::size_t i = n_eq; i < u.level_end(0); ++i) constant[i] = f.element_of(u.term(i));

    // Route (b) packs values straight into the code of F when F has one.
    const ChunkCodec* codec = f.codec();
    const bool packed = codec != nullptr;
    std::vector<std::uint64_t> place(points, 1);
    for (std::size_t p = points; p-- > 1;) place[p - 1] = place[p] * m;
    std::vector<std::size_t> weight(n_eq, 1);
    for (unsigned i = n_eq; i-- > 1;) weight[i - 1] = weight[i] * m;

    // The last equation variable runs innermost in blocks; terms without it
    // are evaluated once per prefix.
    const std::uint64_t last_bit = n_eq ? std::uint64_t{1} << (n_eq - 1) : 0;
    const std::size_t inner = n_eq ? f.size() : 1;
    const std::uint64_t prefixes = tuples / inner;
    constexpr std::size_t kBlock = 256;
    std::vector<Element> last_values(inner * points, 0);
    if (n_eq)
        for (std::uint32_t g = 0; g < inner; ++g)
            std::copy_n(f.values(g).data(), points, last_values.data() + std::size_t{g} * points);

    std::vector<std::uint32_t> tuple(n_eq, 0), args, count(f.size(), 0);
    std::vector<std::uint64_t> seen(f.size(), 0);
    std::uint64_t stamp = 0;
    std::vector<std::uint32_t> block(std::size_t{terms} * kBlock), scalar(terms, 0);
    std::vector<std::uint64_t> codes(kBlock);
    std::vector<const std::uint32_t*> arg_ids(max_arity);
    std::vector<std::size_t> where(points);
    std::vector<Element> row(points);

    Tabulator literal_tab(a, *store, n_free);
    std::vector<TermId> witnesses(n_eq);

    auto violation = [&](const std::string& what) {
        if (rep.violations++ == 0) {
            std::string t;
            for (unsigned i = 0; i < n_eq; ++i) t += (i ? ", " : "") + store->print(f.witness(tuple[i]));
            rep.first_violation = what + " at tuple (" + t + ")";
        }
    };
    auto differs = [&](std::uint32_t i) {
        violation("term " + store->print(u.term(i)) + " differs between F and A^" + std::to_string(n_free));
    };
    // (b) for one point offset vector: the code of t composed with the tuple.
    auto route_b = [&](std::uint32_t i, const Element* last_row) -> std::uint32_t {
        const Element* tv = table[i]->data();
        if (packed) {
            std::uint64_t code = 0;
            for (std::size_t p = 0; p < points; ++p) code += tv[where[p] + last_row[p]] * place[p];
            return f.by_code(code);
        }
        for (std::size_t p = 0; p < points; ++p) row[p] = tv[where[p] + last_row[p]];
        const auto e = f.find(row);
        return e ? *e : kNone;
    };
    const std::vector<Element> zero_row(points, 0);
    // Term tables back to back, with slack for the 4-byte gathers.
    const auto& kern = simd::kernels();
    const std::size_t table_size = tab.points();
    std::vector<std::uint8_t> padded;
    std::vector<std::uint32_t> gather_index, gathered;
    if (packed) {
        padded.assign(terms * table_size + 4, 0);
        for (std::uint32_t i = 0; i < terms; ++i)
            std::copy(table[i]->begin(), table[i]->end(), padded.begin() + std::ptrdiff_t(i * table_size));
        gather_index.resize(points * kBlock);
        gathered.resize(kBlock);
    }

    for (std::uint64_t prefix = 0; prefix < prefixes; ++prefix) {
        for (std::size_t p = 0; p < points; ++p) where[p] = 0;
        for (unsigned i = 0; i + 1 < n_eq; ++i) {
            const Element* v = f.values(tuple[i]).data();
            for (std::size_t p = 0; p < points; ++p) where[p] += v[p] * weight[i];
        }
        // Terms free of the last variable.
        for (std::uint32_t i = 0; i < terms; ++i) {
            if (vars[i] & last_bit) continue;
            // (a) operations of F applied to elements.
            if (i < n_eq) {
                scalar[i] = tuple[i];
            } else if (constant[i] != kNone) {
                scalar[i] = constant[i];
            } else {
                args.resize(kid_begin[i + 1] - kid_begin[i]);
                for (std::uint32_t j = kid_begin[i]; j < kid_begin[i + 1]; ++j)
                    args[j - kid_begin[i]] = scalar[kid_index[j]];
                scalar[i] = f.apply(symbol[i], args);
            }
            if (route_b(i, zero_row.data()) != scalar[i]) differs(i);
            std::fill_n(block.data() + std::size_t{i} * kBlock, kBlock, scalar[i]);
        }

        for (std::size_t g0 = 0; g0 < inner; g0 += kBlock) {
            const std::size_t len = std::min(kBlock, inner - g0);
            if (packed)
                for (std::size_t p = 0; p < points; ++p)
                    for (std::size_t b = 0; b < len; ++b)
                        gather_index[p * kBlock + b] =
                            static_cast<std::uint32_t>(where[p] + last_values[(g0 + b) * points + p]);
            for (std::uint32_t i = 0; i < terms; ++i) {
                if (!(vars[i] & last_bit)) continue;
                std::uint32_t* out = block.data() + std::size_t{i} * kBlock;
                if (i + 1 == n_eq) {
                    for (std::size_t b = 0; b < len; ++b) out[b] = static_cast<std::uint32_t>(g0 + b);
                } else if (packed) {
                    for (std::uint32_t j = kid_begin[i]; j < kid_begin[i + 1]; ++j)
                        arg_ids[j - kid_begin[i]] = block.data() + std::size_t{kid_index[j]} * kBlock;
                    codec->apply_ids(symbol[i], f.chunks(0), arg_ids.data(), len, codes.data());
                    for (std::size_t b = 0; b < len; ++b) out[b] = f.by_code(codes[b]);
                } else {
                    args.resize(kid_begin[i + 1] - kid_begin[i]);
                    for (std::size_t b = 0; b < len; ++b) {
                        for (std::uint32_t j = kid_begin[i]; j < kid_begin[i + 1]; ++j)
                            args[j - kid_begin[i]] = block[std::size_t{kid_index[j]} * kBlock + b];
                        out[b] = f.apply(symbol[i], args);
                    }
                }
                // (b) the term function of A composed with the tuple, pointwise.
                if (packed) {
                    kern.gather_codes(padded.data() + std::size_t{i} * table_size, m, gather_index.data(), points,
                                      kBlock, gathered.data(), len);
                    for (std::size_t b = 0; b < len; ++b) {
                        if (f.by_code(gathered[b]) == out[b]) continue;
                        tuple[n_eq - 1] = static_cast<std::uint32_t>(g0 + b);
                        differs(i);
                    }
                } else {
                    for (std::size_t b = 0; b < len; ++b) {
                        if (route_b(i, last_values.data() + (g0 + b) * points) == out[b]) continue;
                        tuple[n_eq - 1] = static_cast<std::uint32_t>(g0 + b);
                        differs(i);
                    }
                }
            }
            for (std::size_t b = 0; b < len; ++b) {
                if (n_eq) tuple[n_eq - 1] = static_cast<std::uint32_t>(g0 + b);
                // (c) substituted terms evaluated in A.
                if (rep.literal) {
                    for (unsigned i = 0; i < n_eq; ++i) witnesses[i] = f.witness(tuple[i]);
                    for (std::uint32_t i = 0; i < terms; ++i) {
                        const TermId s = substitute(*store, u.term(i), witnesses);
                        const auto e = f.find(literal_tab.values(s));
                        if (!e || *e != block[std::size_t{i} * kBlock + b])
                            violation("substituted term " + store->print(s) + " disagrees with F");
                    }
                }
                // Solutions: pairs p <= q with equal values. The c-th term
                // landing on a value closes c such pairs.
                ++stamp;
                for (std::uint32_t i = 0; i < terms; ++i) {
                    const std::uint32_t v = block[std::size_t{i} * kBlock + b];
                    if (seen[v] != stamp) {
                        seen[v] = stamp;
                        count[v] = 0;
                    }
                    rep.solutions += ++count[v];
                }
            }
        }

        for (unsigned i = n_eq ? n_eq - 1 : 0; i-- > 0;) {
            if (++tuple[i] < f.size()) break;
            tuple[i] = 0;
        }
        if (n_eq) tuple[n_eq - 1] = 0;
    }
    return rep;
}

}  // namespace ualgeo
