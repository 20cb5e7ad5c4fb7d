// Compiled with -mavx2 -mpopcnt on x86-64 only; see CMakeLists.txt.

#include "ualgeo/kernels.hpp"

#include <immintrin.h>

namespace ualgeo::simd {
namespace {

// Table lookups use pshufb, which indexes 16 bytes per lane. Carriers with
// more than 16 elements take the scalar path.
constexpr unsigned kShuffleLimit = 16;

__m256i broadcast_row(const std::uint8_t* row, unsigned len) {
    alignas(16) std::uint8_t buf[16] = {};
    for (unsigned i = 0; i < len; ++i) buf[i] = row[i];
    return _mm256_broadcastsi128_si256(_mm_load_si128(reinterpret_cast<const __m128i*>(buf)));
}

void apply_unary_avx2(const std::uint8_t* table, unsigned m, const std::uint8_t* a,
                      std::uint8_t* out, std::size_t count) {
    std::size_t i = 0;
    if (m <= kShuffleLimit) {
        const __m256i lut = broadcast_row(table, m);
        for (; i + 32 <= count; i += 32) {
            const __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_shuffle_epi8(lut, idx));
        }
    }
    for (; i < count; ++i) out[i] = table[a[i]];
}

// One shuffle per table row: out = row_v[b] wherever a == v.
void apply_binary_avx2(const std::uint8_t* table, unsigned m, const std::uint8_t* a,
                       const std::uint8_t* b, std::uint8_t* out, std::size_t count) {
    std::size_t i = 0;
    if (m <= kShuffleLimit && count >= 32) {
        __m256i rows[kShuffleLimit];
        for (unsigned v = 0; v < m; ++v) rows[v] = broadcast_row(table + v * m, m);
        for (; i + 32 <= count; i += 32) {
            const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
            const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
            __m256i acc = _mm256_setzero_si256();
            for (unsigned v = 0; v < m; ++v) {
                const __m256i sel = _mm256_cmpeq_epi8(va, _mm256_set1_epi8(static_cast<char>(v)));
                acc = _mm256_blendv_epi8(acc, _mm256_shuffle_epi8(rows[v], vb), sel);
            }
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), acc);
        }
    }
    for (; i < count; ++i) out[i] = table[a[i] * m + b[i]];
}

void gather_codes_avx2(const std::uint8_t* table, unsigned m, const std::uint32_t* index, std::size_t points,
                       std::size_t stride, std::uint32_t* codes, std::size_t count) {
    const __m256i vm = _mm256_set1_epi32(static_cast<int>(m));
    const __m256i low = _mm256_set1_epi32(0xff);
    const int* base = reinterpret_cast<const int*>(table);
    std::size_t i = 0;
    for (; i + 8 <= count; i += 8) {
        __m256i acc = _mm256_setzero_si256();
        for (std::size_t p = 0; p < points; ++p) {
            const __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(index + p * stride + i));
            const __m256i v = _mm256_and_si256(_mm256_i32gather_epi32(base, idx, 1), low);
            acc = _mm256_add_epi32(_mm256_mullo_epi32(acc, vm), v);
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(codes + i), acc);
    }
    for (; i < count; ++i) {
        std::uint32_t code = 0;
        for (std::size_t p = 0; p < points; ++p) code = code * m + table[index[p * stride + i]];
        codes[i] = code;
    }
}

void equal_mask_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t count,
                     std::uint64_t* out) {
    const std::size_t words = (count + 63) / 64;
    for (std::size_t w = 0; w < words; ++w) {
        const std::size_t base = w * 64;
        std::uint64_t bits = 0;
        if (base + 64 <= count) {
            const __m256i a0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + base));
            const __m256i b0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + base));
            const __m256i a1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + base + 32));
            const __m256i b1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + base + 32));
            const auto lo = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(a0, b0)));
            const auto hi = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(a1, b1)));
            bits = static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
        } else {
            std::size_t i = base;
            if (i + 32 <= count) {
                const __m256i a0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
                const __m256i b0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
                bits = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(a0, b0)));
                i += 32;
            }
            for (; i < count; ++i) bits |= static_cast<std::uint64_t>(a[i] == b[i]) << (i - base);
        }
        out[w] = bits;
    }
}

#define UALGEO_WORDS_KERNEL(name, vec_op, scalar_op)                                        \
    void name(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {           \
        std::size_t i = 0;                                                                 \
        for (; i + 4 <= words; i += 4) {                                                   \
            const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i)); \
            const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i)); \
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), vec_op);              \
        }                                                                                  \
        for (; i < words; ++i) dst[i] = scalar_op;                                         \
    }

UALGEO_WORDS_KERNEL(words_and_avx2, _mm256_and_si256(d, s), dst[i] & src[i])
UALGEO_WORDS_KERNEL(words_or_avx2, _mm256_or_si256(d, s), dst[i] | src[i])
UALGEO_WORDS_KERNEL(words_andnot_avx2, _mm256_andnot_si256(s, d), dst[i] & ~src[i])

#undef UALGEO_WORDS_KERNEL

bool words_subset_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        // testc(vb, va): (~vb & va) == 0
        if (!_mm256_testc_si256(vb, va)) return false;
    }
    for (; i < words; ++i)
        if (a[i] & ~b[i]) return false;
    return true;
}

std::size_t words_popcount_avx2(const std::uint64_t* a, std::size_t words) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < words; ++i) total += static_cast<std::size_t>(_mm_popcnt_u64(a[i]));
    return total;
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{
        Isa::Avx2,         apply_unary_avx2, apply_binary_avx2, scalar_kernels().gather,
        gather_codes_avx2, equal_mask_avx2,   words_and_avx2,   words_or_avx2,     words_andnot_avx2,
        words_subset_avx2, words_popcount_avx2,
    };
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
    return supported ? &table : nullptr;
}

}  // namespace ualgeo::simd
