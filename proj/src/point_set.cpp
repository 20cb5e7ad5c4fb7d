#include "ualgeo/point_set.hpp"

#include <cctype>
#include <sstream>

#include "ualgeo/algebra.hpp"
#include "ualgeo/error.hpp"
#include "ualgeo/kernels.hpp"

namespace ualgeo {

PointSet::PointSet(unsigned m, unsigned n)
    : m_(m), n_(n), points_(point_count(m, n)), words_((points_ + 63) / 64, 0) {}

PointSet PointSet::full(unsigned m, unsigned n) {
    PointSet s(m, n);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    if (s.points_ % 64) s.words_.back() = (std::uint64_t{1} << (s.points_ % 64)) - 1;
    return s;
}

std::size_t PointSet::count() const { return simd::kernels().words_popcount(words_.data(), words_.size()); }

bool PointSet::subset_of(const PointSet& other) const {
    return simd::kernels().words_subset(words_.data(), other.words_.data(), words_.size());
}

std::vector<std::size_t> PointSet::members() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits) {
            out.push_back(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

PointSet& PointSet::operator&=(const PointSet& other) {
    simd::kernels().words_and(words_.data(), other.words_.data(), words_.size());
    return *this;
}

PointSet& PointSet::operator|=(const PointSet& other) {
    simd::kernels().words_or(words_.data(), other.words_.data(), words_.size());
    return *this;
}

PointSet& PointSet::subtract(const PointSet& other) {
    simd::kernels().words_andnot(words_.data(), other.words_.data(), words_.size());
    return *this;
}

PointSet PointSet::complement() const {
    PointSet out = full(m_, n_);
    out.subtract(*this);
    return out;
}

bool PointSet::lex_less(const PointSet& other) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
        const std::uint64_t diff = words_[w] ^ other.words_[w];
        if (diff) {
            const std::uint64_t low = diff & (~diff + 1);
            return (words_[w] & low) != 0;
        }
    }
    return false;
}

std::size_t PointSet::hash() const {
    std::uint64_t h = 0x84222325cbf29ce4ull ^ points_;
    for (std::uint64_t w : words_) {
        h = (h ^ w) * 0x100000001b3ull;
        h ^= h >> 31;
    }
    return static_cast<std::size_t>(h);
}

bool size_lex_less(const PointSet& a, const PointSet& b) {
    const std::size_t ca = a.count();
    const std::size_t cb = b.count();
    if (ca != cb) return ca < cb;
    return a.lex_less(b);
}

std::string format_tuples(const PointSet& s) {
    std::string out = "{";
    bool first = true;
    for (std::size_t p : s.members()) {
        if (!first) out += ',';
        first = false;
        out += '(';
        const auto coords = decode_point(p, s.carrier(), s.arity());
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(coords[i]);
        }
        out += ')';
    }
    out += '}';
    return out;
}

std::string format_hex(const PointSet& s) {
    static const char* digits = "0123456789abcdef";
    const std::size_t nibbles = s.universe() == 0 ? 1 : (s.universe() + 3) / 4;
    std::string hex(nibbles, '0');
    for (std::size_t p : s.members()) {
        const std::size_t nib = p / 4;
        const int v = (hex[nibbles - 1 - nib] >= 'a' ? hex[nibbles - 1 - nib] - 'a' + 10 : hex[nibbles - 1 - nib] - '0') |
                      (1 << (p % 4));
        hex[nibbles - 1 - nib] = digits[v];
    }
    return "n=" + std::to_string(s.arity()) + " m=" + std::to_string(s.carrier()) + " bits=" + hex;
}

PointSet parse_hex(const std::string& text) {
    std::istringstream in(text);
    std::string tok_n, tok_m, tok_bits;
    in >> tok_n >> tok_m >> tok_bits;
    if (tok_n.rfind("n=", 0) != 0 || tok_m.rfind("m=", 0) != 0 || tok_bits.rfind("bits=", 0) != 0)
        throw ParseError("expected 'n=<n> m=<m> bits=<hex>'", 1, 1);
    unsigned n = 0, m = 0;
    try {
        n = static_cast<unsigned>(std::stoul(tok_n.substr(2)));
        m = static_cast<unsigned>(std::stoul(tok_m.substr(2)));
    } catch (const std::exception&) {
        throw ParseError("bad header number", 1, 1);
    }
    PointSet s(m, n);
    const std::string hex = tok_bits.substr(5);
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[hex.size() - 1 - i])));
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else throw ParseError("bad hex digit", 1, 1);
        for (int b = 0; b < 4; ++b) {
            if (!(v >> b & 1)) continue;
            const std::size_t p = i * 4 + static_cast<std::size_t>(b);
            if (p >= s.universe()) throw Error(ErrorKind::Semantic, "hex bit beyond the point range");
            s.insert(p);
        }
    }
    return s;
}

PointSet parse_tuples(const std::string& text, unsigned m, unsigned n) {
    PointSet s(m, n);
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto expect = [&](char c) {
        skip();
        if (i >= text.size() || text[i] != c) throw ParseError(std::string("expected '") + c + "'", 1, i + 1);
        ++i;
    };
    expect('{');
    skip();
    if (i < text.size() && text[i] == '}') return s;
    while (true) {
        expect('(');
        std::vector<Element> coords;
        skip();
        if (i < text.size() && text[i] != ')') {
            while (true) {
                skip();
                std::size_t start = i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
                if (start == i) throw ParseError("expected coordinate", 1, i + 1);
                const unsigned long v = std::stoul(text.substr(start, i - start));
                if (v >= m) throw Error(ErrorKind::Semantic, "coordinate outside the carrier");
                coords.push_back(static_cast<Element>(v));
                skip();
                if (i < text.size() && text[i] == ',') {
                    ++i;
                    continue;
                }
                break;
            }
        }
        expect(')');
        if (coords.size() != n) throw Error(ErrorKind::Semantic, "tuple has the wrong number of coordinates");
        s.insert(encode_point(coords, m));
        skip();
        if (i < text.size() && text[i] == ',') {
            ++i;
            continue;
        }
        expect('}');
        break;
    }
    return s;
}

}  // namespace ualgeo
