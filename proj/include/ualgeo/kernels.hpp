#pragma once

// Data-parallel inner loops used throughout the library. Every kernel has a
// scalar reference implementation; wider variants are selected once at
// runtime and must agree with the reference bit for bit.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ualgeo::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;

    // out[i] = table[a[i]]; the table has m entries
    void (*apply_unary)(const std::uint8_t* table, unsigned m, const std::uint8_t* a,
                        std::uint8_t* out, std::size_t count);
    // out[i] = table[a[i] * m + b[i]]
    void (*apply_binary)(const std::uint8_t* table, unsigned m, const std::uint8_t* a,
                         const std::uint8_t* b, std::uint8_t* out, std::size_t count);
    // out[i] = src[index[i]]
    void (*gather)(const std::uint8_t* src, const std::uint32_t* index,
                   std::uint8_t* out, std::size_t count);

    // codes[i] = table[index[0*stride+i]] * m^(points-1) + ... + table[index[(points-1)*stride+i]],
    // the mixed-radix code of a gathered row. The table must stay readable 3
    // bytes past its last entry and the codes must fit in 32 bits.
    void (*gather_codes)(const std::uint8_t* table, unsigned m, const std::uint32_t* index,
                         std::size_t points, std::size_t stride, std::uint32_t* codes, std::size_t count);

    // Bit i of out is set iff a[i] == b[i]. Writes ceil(count/64) words;
    // bits at positions >= count are zero.
    void (*equal_mask)(const std::uint8_t* a, const std::uint8_t* b,
                       std::size_t count, std::uint64_t* out);

    void (*words_and)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
    void (*words_or)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
    // dst &= ~src
    void (*words_andnot)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
    // a is a subset of b
    bool (*words_subset)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
    std::size_t (*words_popcount)(const std::uint64_t* a, std::size_t words);
};

const KernelTable& scalar_kernels();

// Null when the build or the running CPU lacks the instruction set.
const KernelTable* avx2_kernels();

// The table every library routine goes through. Chosen on first use: the
// widest supported ISA, unless UALGEO_SIMD=scalar is set.
const KernelTable& kernels();

// Overrides the automatic choice. Returns false (and changes nothing) when
// the requested ISA is unavailable.
bool select_isa(Isa isa);

Isa active_isa();

std::string_view isa_name(Isa isa);

}  // namespace ualgeo::simd
