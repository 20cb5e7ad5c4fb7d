#include <random>
#include <vector>

#include "doctest.h"
#include "ualgeo/kernels.hpp"

using namespace ualgeo::simd;

namespace {

std::vector<std::uint8_t> bytes(std::size_t n, unsigned m, std::mt19937_64& rng) {
    std::vector<std::uint8_t> v(n);
    for (auto& x : v) x = static_cast<std::uint8_t>(rng() % m);
    return v;
}

std::vector<std::uint64_t> words(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = rng() & rng();
    return v;
}

}  // namespace

TEST_CASE("dispatch") {
    CHECK(scalar_kernels().isa == Isa::Scalar);
    CHECK(select_isa(Isa::Scalar));
    CHECK(active_isa() == Isa::Scalar);
    if (avx2_kernels()) {
        CHECK(select_isa(Isa::Avx2));
        CHECK(active_isa() == Isa::Avx2);
    } else {
        CHECK_FALSE(select_isa(Isa::Avx2));
    }
    CHECK(isa_name(Isa::Avx2) == "avx2");
    select_isa(avx2_kernels() ? Isa::Avx2 : Isa::Scalar);
}

TEST_CASE("wide kernels agree with the scalar reference") {
    const KernelTable* wide = avx2_kernels();
    if (!wide) {
        MESSAGE("no AVX2 on this machine; nothing to compare");
        return;
    }
    const KernelTable& ref = scalar_kernels();
    std::mt19937_64 rng(17);
    for (unsigned m : {1u, 2u, 3u, 7u, 16u, 17u, 200u}) {
        for (std::size_t count : {0u, 1u, 31u, 32u, 33u, 64u, 100u, 1000u}) {
            const auto table1 = bytes(m, m, rng);
            const auto table2 = bytes(std::size_t{m} * m, m, rng);
            const auto a = bytes(count, m, rng), b = bytes(count, m, rng);
            std::vector<std::uint8_t> o1(count), o2(count);
            ref.apply_unary(table1.data(), m, a.data(), o1.data(), count);
            wide->apply_unary(table1.data(), m, a.data(), o2.data(), count);
            CHECK(o1 == o2);
            ref.apply_binary(table2.data(), m, a.data(), b.data(), o1.data(), count);
            wide->apply_binary(table2.data(), m, a.data(), b.data(), o2.data(), count);
            CHECK(o1 == o2);

            std::vector<std::uint32_t> index(count);
            for (auto& i : index) i = static_cast<std::uint32_t>(rng() % (table2.size()));
            ref.gather(table2.data(), index.data(), o1.data(), count);
            wide->gather(table2.data(), index.data(), o2.data(), count);
            CHECK(o1 == o2);

            const std::size_t w = (count + 63) / 64;
            std::vector<std::uint64_t> e1(w), e2(w);
            auto c = a;
            for (std::size_t i = 0; i < count; i += 3) c[i] = b[i];
            ref.equal_mask(a.data(), c.data(), count, e1.data());
            wide->equal_mask(a.data(), c.data(), count, e2.data());
            CHECK(e1 == e2);
        }
    }
}

TEST_CASE("gather_codes agrees with the scalar reference") {
    const KernelTable* wide = avx2_kernels();
    if (!wide) return;
    const KernelTable& ref = scalar_kernels();
    std::mt19937_64 rng(23);
    for (unsigned m : {2u, 3u, 4u}) {
        for (std::size_t points : {1u, 4u, 9u, 16u}) {
            const std::size_t table_size = 81;
            auto table = bytes(table_size + 4, m, rng);
            for (std::size_t count : {1u, 7u, 8u, 9u, 256u}) {
                std::vector<std::uint32_t> index(points * count);
                for (auto& i : index) i = static_cast<std::uint32_t>(rng() % table_size);
                std::vector<std::uint32_t> c1(count), c2(count);
                ref.gather_codes(table.data(), m, index.data(), points, count, c1.data(), count);
                wide->gather_codes(table.data(), m, index.data(), points, count, c2.data(), count);
                CHECK(c1 == c2);
            }
        }
    }
}

TEST_CASE("word kernels agree with the scalar reference") {
    const KernelTable* wide = avx2_kernels();
    if (!wide) return;
    const KernelTable& ref = scalar_kernels();
    std::mt19937_64 rng(29);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u}) {
        const auto a = words(n, rng), b = words(n, rng);
        auto x = a, y = a;
        ref.words_and(x.data(), b.data(), n);
        wide->words_and(y.data(), b.data(), n);
        CHECK(x == y);
        x = a, y = a;
        ref.words_or(x.data(), b.data(), n);
        wide->words_or(y.data(), b.data(), n);
        CHECK(x == y);
        x = a, y = a;
        ref.words_andnot(x.data(), b.data(), n);
        wide->words_andnot(y.data(), b.data(), n);
        CHECK(x == y);
        auto sub = a;
        for (std::size_t i = 0; i < n; ++i) sub[i] &= b[i];
        CHECK(ref.words_subset(sub.data(), b.data(), n) == wide->words_subset(sub.data(), b.data(), n));
        CHECK(ref.words_subset(a.data(), b.data(), n) == wide->words_subset(a.data(), b.data(), n));
        CHECK(ref.words_popcount(a.data(), n) == wide->words_popcount(a.data(), n));
    }
}
