#include "ualgeo/kernels.hpp"

#include <bit>

namespace ualgeo::simd {
namespace {

void apply_unary_ref(const std::uint8_t* table, unsigned /*m*/, const std::uint8_t* a,
                     std::uint8_t* out, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) out[i] = table[a[i]];
}

void apply_binary_ref(const std::uint8_t* table, unsigned m, const std::uint8_t* a,
                      const std::uint8_t* b, std::uint8_t* out, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) out[i] = table[a[i] * m + b[i]];
}

void gather_ref(const std::uint8_t* src, const std::uint32_t* index, std::uint8_t* out,
                std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) out[i] = src[index[i]];
}

void gather_codes_ref(const std::uint8_t* table, unsigned m, const std::uint32_t* index, std::size_t points,
                      std::size_t stride, std::uint32_t* codes, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t code = 0;
        for (std::size_t p = 0; p < points; ++p) code = code * m + table[index[p * stride + i]];
        codes[i] = code;
    }
}

void equal_mask_ref(const std::uint8_t* a, const std::uint8_t* b, std::size_t count,
                    std::uint64_t* out) {
    const std::size_t words = (count + 63) / 64;
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t bits = 0;
        const std::size_t base = w * 64;
        const std::size_t end = base + 64 < count ? base + 64 : count;
        for (std::size_t i = base; i < end; ++i)
            bits |= static_cast<std::uint64_t>(a[i] == b[i]) << (i - base);
        out[w] = bits;
    }
}

void words_and_ref(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i) dst[i] &= src[i];
}

void words_or_ref(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i) dst[i] |= src[i];
}

void words_andnot_ref(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i) dst[i] &= ~src[i];
}

bool words_subset_ref(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i)
        if (a[i] & ~b[i]) return false;
    return true;
}

std::size_t words_popcount_ref(const std::uint64_t* a, std::size_t words) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < words; ++i) total += static_cast<std::size_t>(std::popcount(a[i]));
    return total;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        Isa::Scalar,      apply_unary_ref, apply_binary_ref, gather_ref,
        gather_codes_ref, equal_mask_ref,   words_and_ref,   words_or_ref,     words_andnot_ref,
        words_subset_ref, words_popcount_ref,
    };
    return table;
}

}  // namespace ualgeo::simd
