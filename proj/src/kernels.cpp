#include "ualgeo/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace ualgeo::simd {

#if !defined(UALGEO_HAVE_AVX2)
const KernelTable* avx2_kernels() { return nullptr; }
#endif

namespace {

const KernelTable* initial_choice() {
    if (const char* env = std::getenv("UALGEO_SIMD"); env && std::string(env) == "scalar")
        return &scalar_kernels();
    if (const KernelTable* wide = avx2_kernels()) return wide;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
    static std::atomic<const KernelTable*> table{initial_choice()};
    return table;
}

}  // namespace

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

bool select_isa(Isa isa) {
    const KernelTable* table = isa == Isa::Scalar ? &scalar_kernels() : avx2_kernels();
    if (!table) return false;
    active().store(table, std::memory_order_release);
    return true;
}

Isa active_isa() { return kernels().isa; }

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

}  // namespace ualgeo::simd
