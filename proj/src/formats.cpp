#include "ualgeo/formats.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ualgeo/error.hpp"

namespace ualgeo {

namespace {

struct Line {
    std::size_t number;
    std::string_view text;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Non-blank lines with comments removed.
std::vector<Line> content_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    while (!text.empty() || number == 0) {
        ++number;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) out.push_back({number, line});
        if (text.empty()) break;
    }
    return out;
}

// Splits "key rest" at the first blank or colon.
std::pair<std::string_view, std::string_view> head(std::string_view line) {
    const auto cut = line.find_first_of(" \t:");
    if (cut == std::string_view::npos) return {line, {}};
    return {line.substr(0, cut), trim(line.substr(cut))};
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        s = trim(s);
        if (s.empty()) break;
        const auto cut = s.find_first_of(" \t");
        out.push_back(s.substr(0, cut));
        if (cut == std::string_view::npos) break;
        s = s.substr(cut);
    }
    return out;
}

unsigned parse_count(const Line& line, std::string_view word, std::size_t column) {
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size())
        throw ParseError("expected a non-negative integer, got '" + std::string(word) + "'", line.number, column);
    return value;
}

std::size_t column_of(const Line& line, std::string_view part) {
    return static_cast<std::size_t>(part.data() - line.text.data()) + 1;
}

// Rethrows errors from the term parser with this file's line number.
template <class Fn>
auto at_line(const Line& line, std::size_t offset, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw ParseError(e.detail(), line.number, offset + e.column());
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Semantic) throw;
        throw Error(ErrorKind::Semantic, "line " + std::to_string(line.number) + ": " + e.what());
    }
}

}  // namespace

FiniteAlgebra parse_algebra(std::string_view text) {
    const auto lines = content_lines(text);
    std::string name;
    std::optional<unsigned> size;
    std::vector<std::string> element_names;
    std::optional<Signature> sig;
    std::vector<std::optional<std::vector<Element>>> tables;

    for (const Line& line : lines) {
        const auto [key, rest] = head(line.text);
        if (key == "algebra") {
            if (rest.empty() || words(rest).size() != 1) throw ParseError("expected 'algebra <name>'", line.number, 1);
            name = std::string(rest);
        } else if (key == "size") {
            const auto w = words(rest);
            if (w.size() != 1) throw ParseError("expected 'size <m>'", line.number, 1);
            size = parse_count(line, w[0], column_of(line, w[0]));
        } else if (key == "elements") {
            for (auto w : words(rest)) element_names.emplace_back(w);
        } else if (key == "ops") {
            if (sig) throw ParseError("duplicate 'ops:' line", line.number, 1);
            sig = at_line(line, 0, [&] { return parse_signature(line.text); });
            tables.assign(sig->size(), std::nullopt);
        } else {
            if (!sig) throw ParseError("table before 'ops:' line", line.number, 1);
            if (!size) throw ParseError("table before 'size' line", line.number, 1);
            if (line.text.size() <= key.size() || line.text[key.size()] != ':')
                throw ParseError("expected '<symbol>: <entries>'", line.number, key.size() + 1);
            const auto symbol = sig->find(key);
            if (!symbol)
                throw Error(ErrorKind::Semantic,
                            "line " + std::to_string(line.number) + ": table for unknown symbol '" + std::string(key) + "'");
            if (tables[symbol->value])
                throw Error(ErrorKind::Semantic,
                            "line " + std::to_string(line.number) + ": second table for '" + std::string(key) + "'");
            std::vector<Element> entries;
            for (auto w : words(line.text.substr(key.size() + 1))) {
                const unsigned v = parse_count(line, w, column_of(line, w));
                if (v >= *size)
                    throw Error(ErrorKind::Semantic, "line " + std::to_string(line.number) + ": entry " +
                                                         std::to_string(v) + " outside the carrier");
                entries.push_back(static_cast<Element>(v));
            }
            tables[symbol->value] = std::move(entries);
        }
    }
    if (name.empty()) throw ParseError("missing 'algebra <name>' line", 1, 1);
    if (!size) throw ParseError("missing 'size <m>' line", 1, 1);
    if (!sig) throw ParseError("missing 'ops:' line", 1, 1);
    std::vector<std::vector<Element>> out;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (!tables[i]) throw Error(ErrorKind::Semantic, "no table for '" + sig->symbols()[i].name + "'");
        out.push_back(std::move(*tables[i]));
    }
    return FiniteAlgebra(std::move(name), std::move(*sig), *size, std::move(out), std::move(element_names));
}

std::string print_algebra(const FiniteAlgebra& a) {
    std::ostringstream out;
    out << "algebra " << a.name() << "\n";
    out << "size " << a.size() << "\n";
    if (!a.element_names().empty()) {
        out << "elements";
        for (const auto& e : a.element_names()) out << " " << e;
        out << "\n";
    }
    Signature plain(a.signature().symbols(), a.signature().name());
    out << print_signature(plain) << "\n";
    for (std::uint32_t s = 0; s < plain.size(); ++s) {
        out << plain.symbols()[s].name << ":";
        for (Element e : a.table(SymbolId{s})) out << " " << unsigned(e);
        out << "\n";
    }
    return out.str();
}

SystemHeader parse_system_header(std::string_view text) {
    SystemHeader h;
    bool seen = false;
    for (const Line& line : content_lines(text)) {
        const auto [key, rest] = head(line.text);
        if (key == "nvars") {
            const auto w = words(rest);
            if (w.size() != 1) throw ParseError("expected 'nvars <n>'", line.number, 1);
            h.nvars = parse_count(line, w[0], column_of(line, w[0]));
            seen = true;
        } else if (key == "coefficients" && rest.empty()) {
            h.coefficients = true;
        } else {
            break;
        }
    }
    if (!seen) throw ParseError("missing 'nvars <n>' header", 1, 1);
    return h;
}

SystemFile parse_system(std::string_view text, TermStore& store) {
    SystemFile file;
    file.header = parse_system_header(text);
    if (file.header.coefficients != store.signature().has_coefficients())
        throw Error(ErrorKind::Semantic, file.header.coefficients
                                             ? "system uses coefficients but the language has none"
                                             : "language has coefficients but the system does not declare them");
    bool in_header = true, in_cycle = false;
    for (const Line& line : content_lines(text)) {
        const auto [key, rest] = head(line.text);
        if (in_header && (key == "nvars" || (key == "coefficients" && rest.empty()))) continue;
        in_header = false;
        if (line.text == "cycle:") {
            if (in_cycle) throw ParseError("second 'cycle:' marker", line.number, 1);
            in_cycle = true;
            continue;
        }
        const Equation eq = at_line(line, 0, [&] { return parse_equation(line.text, store, file.header.nvars); });
        (in_cycle ? file.system.cycle : file.system.equations).push_back(eq);
    }
    if (in_cycle && file.system.cycle.empty()) throw ParseError("'cycle:' marker with no equations after it", 1, 1);
    return file;
}

std::string print_system(const TermStore& store, const SystemFile& file) {
    std::string out = "nvars " + std::to_string(file.header.nvars) + "\n";
    if (file.header.coefficients) out += "coefficients\n";
    for (const auto& eq : file.system.equations) out += print_equation(store, eq) + "\n";
    if (file.system.is_family()) {
        out += "cycle:\n";
        for (const auto& eq : file.system.cycle) out += print_equation(store, eq) + "\n";
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Parse, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ualgeo
