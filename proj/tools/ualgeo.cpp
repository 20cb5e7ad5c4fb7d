#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ualgeo/catalog.hpp"
#include "ualgeo/conditions.hpp"
#include "ualgeo/error.hpp"
#include "ualgeo/formats.hpp"
#include "ualgeo/logic.hpp"
#include "ualgeo/suites.hpp"

using namespace ualgeo;

namespace {

constexpr int kNegative = 3;  // inconsistent system, failed property

struct Flags {
    std::optional<unsigned> n;
    std::optional<unsigned> depth;
    std::string budget;
    std::uint64_t seed = 1;
    bool machine = false;
    bool strict = false;
};

// key=value lines printed after the human-readable output with --machine.
class Machine {
public:
    explicit Machine(bool on) : on_(on) {}
    template <class T>
    Machine& operator()(const std::string& key, const T& value) {
        std::ostringstream s;
        s << value;
        lines_.push_back(key + "=" + s.str());
        return *this;
    }
    void flush(std::ostream& out) const {
        if (!on_) return;
        out << "--\n";
        for (const auto& l : lines_) out << l << "\n";
    }

private:
    bool on_;
    std::vector<std::string> lines_;
};

Budget budget_of(const Flags& f) {
    Budget b = Budget::from_environment();
    return f.budget.empty() ? b : Budget::parse(f.budget, b);
}

FiniteAlgebra load_algebra(const std::string& path) {
    if (path.rfind("catalog:", 0) == 0) {
        const std::string name = path.substr(8);
        if (auto a = catalog_algebra(name)) return *a;
        throw Error(ErrorKind::Semantic, "no catalog algebra named '" + name + "'");
    }
    return parse_algebra(read_file(path));
}

// An algebra, its term language and one system read against them. The
// algebra gains coefficient constants when the system declares them.
struct Problem {
    std::shared_ptr<FiniteAlgebra> algebra;
    std::shared_ptr<TermStore> store;
    SystemFile file;
    unsigned n = 0;
};

Problem load_problem(const std::string& algebra_path, const std::string& system_path, const Flags& flags) {
    Problem p;
    FiniteAlgebra a = load_algebra(algebra_path);
    const std::string text = read_file(system_path);
    const SystemHeader header = parse_system_header(text);
    if (header.coefficients) a = a.with_coefficients();
    p.algebra = std::make_shared<FiniteAlgebra>(std::move(a));
    p.store = std::make_shared<TermStore>(p.algebra->signature());
    p.file = parse_system(text, *p.store);
    p.n = flags.n.value_or(header.nvars);
    if (p.n < header.nvars)
        throw Error(ErrorKind::Semantic, "--n " + std::to_string(p.n) + " is below the system's nvars " +
                                             std::to_string(header.nvars));
    return p;
}

// Point set text from a literal ("{(0,1),...}" or "n=.. m=.. bits=..") or
// from a file holding one, '#' comments dropped. nullopt when the argument
// is a file with something else in it.
std::optional<std::string> point_set_text(const std::string& arg) {
    auto is_points = [](const std::string& t) { return !t.empty() && (t[0] == '{' || t.rfind("n=", 0) == 0); };
    if (is_points(arg)) return arg;
    std::string text;
    std::istringstream in(read_file(arg));
    for (std::string line; std::getline(in, line);) {
        line = line.substr(0, line.find('#'));
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        text += line.substr(first, last - first + 1);
    }
    if (!is_points(text)) return std::nullopt;
    return text;
}

PointSet load_points(const std::string& arg, unsigned m, unsigned n) {
    const auto text = point_set_text(arg);
    if (!text) throw ParseError("'" + arg + "' does not hold a point set", 1, 1);
    if (text->rfind("n=", 0) == 0) {
        PointSet s = parse_hex(*text);
        if (s.carrier() != m || s.arity() != n)
            throw Error(ErrorKind::Semantic, "point set is over a different carrier or arity");
        return s;
    }
    return parse_tuples(*text, m, n);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string index_list(const std::vector<std::size_t>& v) {
    std::vector<std::string> s;
    for (auto i : v) s.push_back(std::to_string(i + 1));
    return join(s, ",");
}

TermFunctionAlgebra build_free(const FiniteAlgebra& a, std::shared_ptr<TermStore> store, unsigned n,
                               const Budget& b) {
    return TermFunctionAlgebra::build(a, std::move(store), n, b);
}

// ---------------------------------------------------------------- commands

int cmd_solve(const std::string& alg, const std::string& sys, const Flags& fl) {
    const Problem p = load_problem(alg, sys, fl);
    const auto eqs = p.file.system.one_period();
    const PointSet s = solve(*p.algebra, *p.store, eqs, p.n);
    std::cout << format_tuples(s) << "\n" << format_hex(s) << "\n";
    Machine(fl.machine)("command", "solve")("n", p.n)("m", p.algebra->size())("points", s.count())(
        "consistent", s.is_empty() ? "false" : "true")("set", format_hex(s))
        .flush(std::cout);
    return s.is_empty() ? kNegative : 0;
}

int cmd_vstar(const std::string& alg, const std::string& sys, const Flags& fl) {
    const Problem p = load_problem(alg, sys, fl);
    const PointSet s = v_star(*p.algebra, *p.store, p.file.system, p.n);
    std::cout << format_tuples(s) << "\n" << format_hex(s) << "\n";
    Machine(fl.machine)("command", "vstar")("n", p.n)("family", p.file.system.is_family() ? "true" : "false")(
        "points", s.count())("set", format_hex(s))
        .flush(std::cout);
    return 0;
}

int cmd_domain(const std::string& alg, const Flags& fl) {
    const FiniteAlgebra a = load_algebra(alg);
    const unsigned top = fl.n.value_or(2);
    const Budget b = budget_of(fl);
    Machine mach(fl.machine);
    mach("command", "domain");
    for (unsigned n = 1; n <= top; ++n) {
        auto store = std::make_shared<TermStore>(a.signature());
        const auto f = build_free(a, store, n, b);
        const auto lattice = ZariskiLattice::build(f, b);
        const auto rep = is_equational_domain(lattice);
        if (!rep.domain) {
            const auto [i, j] = *rep.counterexample;
            const PointSet u = lattice.member(i) | lattice.member(j);
            std::cout << "NOT an equational domain at n=" << n << "; counterexample: " << lattice.describe(i)
                      << " ∪ " << lattice.describe(j) << "\n";
            std::cout << "union " << format_tuples(u) << " is "
                      << (lattice.contains(u) ? "in" : "not in") << " the lattice of " << lattice.size()
                      << " algebraic sets\n";
            mach("domain", "false")("n", n)("first", lattice.describe(i))("second", lattice.describe(j))(
                "union", format_hex(u));
            mach.flush(std::cout);
            return 0;
        }
    }
    std::cout << "equational domain up to n=" << top << "\n";
    mach("domain", "true")("n", top).flush(std::cout);
    return 0;
}

int cmd_decompose(const std::string& alg, const std::string& set, const Flags& fl) {
    const FiniteAlgebra a = load_algebra(alg);
    const unsigned n = fl.n.value_or(2);
    const Budget b = budget_of(fl);
    auto store = std::make_shared<TermStore>(a.signature());
    const auto f = build_free(a, store, n, b);
    const auto lattice = ZariskiLattice::build(f, b);
    const PointSet z = load_points(set, a.size(), n);
    const auto parts = irreducible_decomposition(lattice, z);
    std::cout << parts.size() << (parts.size() == 1 ? " component" : " components") << "\n";
    std::vector<std::string> names;
    for (const auto& c : parts) {
        const auto i = lattice.find(c);
        const std::string name = i ? lattice.describe(*i) : "?";
        names.push_back(name);
        std::cout << "  " << name << " = " << format_tuples(c) << "\n";
    }
    Machine(fl.machine)("command", "decompose")("n", n)("components", parts.size())("sets", join(names, "; "))
        .flush(std::cout);
    return 0;
}

std::vector<std::string> class_lines(const TermStore& store, const TermFunctionAlgebra& f, const RadicalIdeal& r) {
    std::vector<std::vector<std::string>> members(r.classes());
    for (std::uint32_t e = 0; e < f.size(); ++e) members[r.class_of(e)].push_back(store.print(f.witness(e)));
    std::vector<std::string> out;
    for (auto& m : members) out.push_back("{" + join(m, ", ") + "}");
    return out;
}

int cmd_radical(const std::string& alg, const std::string& input, const Flags& fl) {
    const Budget b = budget_of(fl);
    std::shared_ptr<FiniteAlgebra> a;
    std::shared_ptr<TermStore> store;
    unsigned n = 0;
    std::optional<PointSet> y;
    std::vector<Equation> eqs;
    if (point_set_text(input)) {
        a = std::make_shared<FiniteAlgebra>(load_algebra(alg));
        store = std::make_shared<TermStore>(a->signature());
        n = fl.n.value_or(2);
        y = load_points(input, a->size(), n);
    } else {
        Problem p = load_problem(alg, input, fl);
        a = p.algebra;
        store = p.store;
        n = p.n;
        eqs = p.file.system.one_period();
    }
    const auto f = build_free(*a, store, n, b);
    const RadicalIdeal r = y ? radical_of_set(f, *y) : radical_of_system(f, *store, eqs);
    std::cout << "Rad: " << r.classes() << " classes on F(" << n << ") of " << f.size() << " elements\n";
    for (const auto& line : class_lines(*store, f, r)) std::cout << "  " << line << "\n";
    std::string partition;
    for (std::uint32_t e = 0; e < f.size(); ++e) partition += (e ? "," : "") + std::to_string(r.class_of(e));
    Machine(fl.machine)("command", "radical")("n", n)("free_size", f.size())("classes", r.classes())(
        "partition", partition)
        .flush(std::cout);
    return 0;
}

int cmd_coord(const std::string& alg, const std::string& set, const Flags& fl) {
    const FiniteAlgebra a = load_algebra(alg);
    const unsigned n = fl.n.value_or(2);
    const Budget b = budget_of(fl);
    auto store = std::make_shared<TermStore>(a.signature());
    const auto f = build_free(a, store, n, b);
    const PointSet y = load_points(set, a.size(), n);
    const auto coord = coordinate_algebra(f, y);
    const auto iso = check_coordinate_isomorphism(f, radical_of_set(f, y), coord);
    std::vector<std::string> names;
    for (std::uint32_t e = 0; e < coord.algebra.size(); ++e) names.push_back(store->print(coord.algebra.witness(e)));
    std::cout << "T(Y): " << coord.algebra.size() << " elements: " << join(names, ", ") << "\n";
    std::cout << "F(" << n << ")/Rad(Y) -> T(Y): " << (iso.ok() ? "isomorphism verified" : "FAILED: " + iso.failure)
              << "\n";
    Machine(fl.machine)("command", "coord")("n", n)("points", y.count())("size", coord.algebra.size())(
        "isomorphism", iso.ok() ? "true" : "false")
        .flush(std::cout);
    return iso.ok() ? 0 : kNegative;
}

int cmd_free(const std::string& alg, const Flags& fl) {
    const FiniteAlgebra a = load_algebra(alg);
    const unsigned n = fl.n.value_or(2);
    auto store = std::make_shared<TermStore>(a.signature());
    const auto f = build_free(a, store, n, budget_of(fl));
    // Terms with variables first, then closed terms; each group in element order.
    std::vector<std::string> open, closed;
    for (std::uint32_t e = 0; e < f.size(); ++e)
        (store->variable_bound(f.witness(e)) ? open : closed).push_back(store->print(f.witness(e)));
    open.insert(open.end(), closed.begin(), closed.end());
    std::cout << f.size() << (f.size() == 1 ? " element: " : " elements: ") << join(open, ", ") << "\n";
    Machine(fl.machine)("command", "free")("n", n)("size", f.size())(
        "method", f.method_used() == ClosureMethod::Codes ? "codes" : "rows")
        .flush(std::cout);
    return 0;
}

void print_equations(const TermStore& store, const std::vector<Equation>& eqs, const std::vector<std::size_t>& idx) {
    for (auto i : idx) std::cout << "  [" << i + 1 << "] " << print_equation(store, eqs[i]) << "\n";
}

int cmd_reduce(const std::string& alg, const std::string& sys, const Flags& fl) {
    const Problem p = load_problem(alg, sys, fl);
    const auto cert = reduce_system(*p.algebra, *p.store, p.file.system, p.n);
    std::cout << "kept " << cert.kept.size() << " of " << cert.original.size() << " equations\n";
    print_equations(*p.store, cert.original, cert.kept);
    std::cout << "V(S0) = V(S) = " << format_tuples(cert.solution) << "\n";
    std::cout << "certificate " << (cert.verified ? "verified" : "NOT verified") << "\n";
    Machine(fl.machine)("command", "reduce")("n", p.n)("original", cert.original.size())("kept",
                                                                                        index_list(cert.kept))(
        "verified", cert.verified ? "true" : "false")("set", format_hex(cert.solution))
        .flush(std::cout);
    return cert.verified ? 0 : kNegative;
}

int cmd_independent(const std::string& alg, const std::string& sys, const Flags& fl) {
    const Problem p = load_problem(alg, sys, fl);
    if (p.file.system.is_family()) throw Error(ErrorKind::Precondition, "independent needs a finite system");
    const auto& eqs = p.file.system.equations;
    const auto sub = independent_subsystem(*p.algebra, *p.store, eqs, p.n, budget_of(fl));
    std::cout << "independent subsystem of " << sub.kept.size() << (sub.kept.size() == 1 ? " equation\n" : " equations\n");
    print_equations(*p.store, eqs, sub.kept);
    std::cout << "equivalent: " << (sub.equivalent ? "yes" : "no") << "\n";
    std::cout << "independent: " << (sub.independence.independent ? "yes" : "no") << " ("
              << (sub.independence.exhaustive ? "exhaustive" : "sampled") << "; subsets checked: "
              << sub.independence.subsets_checked << ")\n";
    const bool ok = sub.equivalent && sub.independence.independent;
    Machine(fl.machine)("command", "independent")("n", p.n)("kept", index_list(sub.kept))(
        "equivalent", sub.equivalent ? "true" : "false")("independent",
                                                         sub.independence.independent ? "true" : "false")(
        "exhaustive", sub.independence.exhaustive ? "true" : "false")
        .flush(std::cout);
    return ok ? 0 : kNegative;
}

int cmd_idbase(const std::string& alg, const Flags& fl) {
    const FiniteAlgebra a = load_algebra(alg);
    const unsigned n = fl.n.value_or(1);
    auto store = std::make_shared<TermStore>(a.signature());
    const auto f = build_free(a, store, n, budget_of(fl));
    const auto basis = identity_base(f);
    const RadicalIdeal r = radical_of_set(f, basis.points);
    const bool verified = r.classes() == f.size();
    std::cout << format_tuples(basis.points) << "\n";
    std::cout << "Rad(B) is the identity relation on F(" << n << "): " << (verified ? "verified" : "FAILED")
              << "; minimal: " << (basis.minimal ? "yes" : "no") << "\n";
    Machine(fl.machine)("command", "idbase")("n", n)("points", basis.points.count())("set",
                                                                                   format_hex(basis.points))(
        "verified", verified ? "true" : "false")("minimal", basis.minimal ? "true" : "false")
        .flush(std::cout);
    return verified ? 0 : kNegative;
}

int cmd_identities(const std::string& alg, const Flags& fl) {
    const FiniteAlgebra a = load_algebra(alg);
    const unsigned n = fl.n.value_or(2), d = fl.depth.value_or(2);
    const Budget b = budget_of(fl);
    auto store = std::make_shared<TermStore>(a.signature());
    const auto ids = IdentitySet::build(a, store, n, b);
    const auto u = TermUniverse::build(*store, n, d, b);
    std::vector<std::vector<std::uint32_t>> by_class(ids.free_algebra().size());
    for (std::uint32_t i = 0; i < u.size(); ++i) by_class[ids.class_of(u.term(i))].push_back(i);
    std::sort(by_class.begin(), by_class.end(), [](const auto& x, const auto& y) {
        if (x.empty() || y.empty()) return !x.empty() && y.empty();
        return x.front() < y.front();
    });
    std::size_t classes = 0, listed = 0;
    for (const auto& c : by_class) classes += !c.empty();
    std::cout << u.size() << " terms of depth <= " << d << " in " << classes << " classes of F(" << n << ")\n";
    for (const auto& c : by_class)
        for (std::size_t k = 1; k < c.size(); ++k, ++listed)
            std::cout << "  " << store->print(u.term(c.front())) << " ~ " << store->print(u.term(c[k])) << "\n";
    Machine(fl.machine)("command", "identities")("n", n)("depth", d)("terms", u.size())("classes", classes)(
        "identities", listed)
        .flush(std::cout);
    return 0;
}

int cmd_axiomatize(const std::string& alg, const std::string& sys, const Flags& fl) {
    const Problem p = load_problem(alg, sys, fl);
    if (p.file.system.is_family()) throw Error(ErrorKind::Precondition, "axiomatize needs a finite list");
    std::vector<FiniteAlgebra> catalog;
    for (auto& b : standard_catalog())
        if (b.signature().same_symbols(p.algebra->signature()) && !p.algebra->signature().has_coefficients())
            catalog.push_back(std::move(b));
    const auto& sigma = p.file.system.equations;
    const auto rep = axiomatize_finite(*p.algebra, p.store, sigma, p.n, catalog, budget_of(fl));
    std::cout << "Sigma0: " << rep.kept.size() << " of " << sigma.size() << " identities over F(" << p.n << ") of "
              << rep.free_size << " elements\n";
    print_equations(*p.store, sigma, rep.kept);
    std::cout << "reduction " << (rep.reduction_verified ? "verified" : "NOT verified") << "\n";
    std::cout << "catalog check over " << catalog.size() << " algebras: "
              << (rep.mismatches.empty() ? "Sigma0 and Sigma agree" : "disagree on " + join(rep.mismatches, ", "))
              << "\n";
    Machine(fl.machine)("command", "axiomatize")("n", p.n)("kept", index_list(rep.kept))("free_size",
                                                                                       rep.free_size)(
        "verified", rep.reduction_verified ? "true" : "false")("catalog", catalog.size())("mismatches",
                                                                                         rep.mismatches.size())
        .flush(std::cout);
    return rep.reduction_verified && rep.mismatches.empty() ? 0 : kNegative;
}

int cmd_chainreport(const std::string& alg, const Flags& fl) {
    const FiniteAlgebra a = load_algebra(alg);
    const unsigned n = fl.n.value_or(2);
    const Budget b = budget_of(fl);
    auto store = std::make_shared<TermStore>(a.signature());
    const auto f = build_free(a, store, n, b);
    const auto lattice = ZariskiLattice::build(f, b);
    const auto rep = chain_report(lattice, b);
    std::cout << "lattice: " << rep.lattice_size << " algebraic sets in A^" << n << "\n";
    std::cout << "longest descending chain of algebraic sets: " << rep.set_chain << "\n";
    std::cout << "longest descending chain of radicals: " << rep.radical_chain << "\n";
    std::cout << (rep.equal() ? "equal" : "DIFFERENT") << "\n";
    Machine(fl.machine)("command", "chainreport")("n", n)("lattice", rep.lattice_size)("set_chain", rep.set_chain)(
        "radical_chain", rep.radical_chain)("equal", rep.equal() ? "true" : "false")
        .flush(std::cout);
    return rep.equal() ? 0 : kNegative;
}

int cmd_verify(const std::string& alg, const std::string& suite, const Flags& fl) {
    const FiniteAlgebra a = load_algebra(alg);
    SuiteOptions o;
    o.n = fl.n;
    o.depth = fl.depth;
    o.budget = budget_of(fl);
    o.seed = fl.seed;
    std::vector<std::string> suites;
    if (suite == "all")
        suites = suite_names();
    else if (std::find(suite_names().begin(), suite_names().end(), suite) != suite_names().end())
        suites.push_back(suite);
    else
        throw Error(ErrorKind::Semantic, "unknown suite '" + suite + "'");
    std::size_t pass = 0, fail = 0, skip = 0;
    std::cout << "algebra " << a.name() << ", seed " << fl.seed << "\n";
    for (const auto& s : suites)
        for (const auto& r : run_suite(a, s, o)) {
            std::cout << r.name << " | " << r.range << " | " << verdict_name(r.verdict);
            if (!r.detail.empty()) std::cout << " | " << r.detail;
            std::cout << "\n";
            (r.verdict == Verdict::Pass ? pass : r.verdict == Verdict::Fail ? fail : skip)++;
        }
    Machine(fl.machine)("command", "verify")("suite", suite)("seed", fl.seed)("pass", pass)("fail", fail)("skipped",
                                                                                                    skip)
        .flush(std::cout);
    if (fail) return kNegative;
    if (skip && fl.strict) return static_cast<int>(ErrorKind::Budget);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Algebraic geometry over finite algebras"};
    app.require_subcommand(1);
    Flags flags;
    std::string alg, second;
    std::function<int()> run;

    auto common = [&](CLI::App* sub, bool depth) {
        sub->add_option("--n", flags.n, "number of variables");
        if (depth) sub->add_option("--depth", flags.depth, "term depth bound");
        sub->add_option("--budget", flags.budget, "budget: an element count or key=value,... list");
        sub->add_flag("--machine", flags.machine, "append key=value lines");
    };
    auto with_algebra = [&](const char* name, const char* help, bool depth, auto fn) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("algebra", alg, "algebra file or catalog:<name>")->required();
        common(sub, depth);
        sub->callback([&, fn] { run = [&, fn] { return fn(alg, flags); }; });
        return sub;
    };
    auto with_two = [&](const char* name, const char* help, const char* what, bool depth, auto fn) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("algebra", alg, "algebra file or catalog:<name>")->required();
        sub->add_option(what, second, what)->required();
        common(sub, depth);
        sub->callback([&, fn] { run = [&, fn] { return fn(alg, second, flags); }; });
        return sub;
    };

    with_two("solve", "solution set of a system", "system", false, cmd_solve);
    with_two("vstar", "points failing finitely many equations of a family", "system", false, cmd_vstar);
    with_two("decompose", "irreducible components of a closed set", "set", false, cmd_decompose);
    with_two("radical", "radical of a system file or point set", "input", false, cmd_radical);
    with_two("coord", "coordinate algebra of a point set", "set", false, cmd_coord);
    with_two("reduce", "finite equivalent subsystem", "system", false, cmd_reduce);
    with_two("independent", "independent equivalent subsystem", "system", false, cmd_independent);
    with_two("axiomatize", "reduce an identity list over F(n)", "identities", false, cmd_axiomatize);
    with_algebra("domain", "equational domain check up to --n", false, cmd_domain);
    with_algebra("free", "elements of F(n) as witness terms", false, cmd_free);
    with_algebra("idbase", "identity base of A^n", false, cmd_idbase);
    with_algebra("identities", "identities among terms up to --depth", true, cmd_identities);
    with_algebra("chainreport", "longest chains of algebraic sets and radicals", false, cmd_chainreport);
    CLI::App* verify = with_two("verify", "run a property suite (geometry, lemma1, corollary1, deduction, "
                                          "conditions, all)",
                                "suite", true, cmd_verify);
    verify->add_option("--seed", flags.seed, "seed for random instances");
    verify->add_flag("--strict", flags.strict, "exit 4 when a property was skipped");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::Parse);
    }
    try {
        return run();
    } catch (const Error& e) {
        std::cerr << "ualgeo: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "ualgeo: internal error: " << e.what() << "\n";
        return 70;
    }
}
