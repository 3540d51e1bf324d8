#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fairshift/kernels.hpp"

namespace fairshift::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, detail::dot_scalar, detail::axpy_scalar,
                              detail::squared_distance_scalar};

#if defined(FAIRSHIFT_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, detail::dot_avx2, detail::axpy_avx2,
                            detail::squared_distance_avx2};

bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

#if defined(FAIRSHIFT_HAVE_NEON)
constexpr KernelTable kNeon{Isa::neon, detail::dot_neon, detail::axpy_neon,
                            detail::squared_distance_neon};
#endif

const KernelTable* best_available() {
#if defined(FAIRSHIFT_HAVE_AVX2)
    if (cpu_has_avx2()) {
        return &kAvx2;
    }
#endif
#if defined(FAIRSHIFT_HAVE_NEON)
    return &kNeon;
#endif
    return &kScalar;
}

const KernelTable* initial_table() {
    if (const char* forced = std::getenv("FAIRSHIFT_ISA"); forced != nullptr && *forced != '\0') {
        const KernelTable* t = table_for(parse_isa(forced));
        if (t == nullptr) {
            throw std::invalid_argument(std::string("FAIRSHIFT_ISA=") + forced +
                                        " is not available on this machine");
        }
        return t;
    }
    return best_available();
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

Isa parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2") return Isa::avx2;
    if (name == "neon") return Isa::neon;
    throw std::invalid_argument("unknown kernel ISA '" + std::string(name) + "'");
}

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* table_for(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return &kScalar;
        case Isa::avx2:
#if defined(FAIRSHIFT_HAVE_AVX2)
            return cpu_has_avx2() ? &kAvx2 : nullptr;
#else
            return nullptr;
#endif
        case Isa::neon:
#if defined(FAIRSHIFT_HAVE_NEON)
            return &kNeon;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (table_for(isa) != nullptr) {
            out.push_back(isa);
        }
    }
    return out;
}

const KernelTable& active() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = initial_table();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void select(Isa isa) {
    const KernelTable* t = table_for(isa);
    if (t == nullptr) {
        throw std::invalid_argument("kernel ISA '" + std::string(isa_name(isa)) +
                                    "' is not available on this machine");
    }
    g_active.store(t, std::memory_order_release);
}

void matvec(std::span<const double> matrix, std::size_t cols, std::span<const double> x,
            std::span<double> out) {
    const KernelTable& k = active();
    const std::size_t rows = out.size();
    for (std::size_t i = 0; i < rows; ++i) {
        out[i] = k.dot(matrix.data() + i * cols, x.data(), cols);
    }
}

void matvec_transposed_accumulate(std::span<const double> matrix, std::size_t cols,
                                  std::span<const double> coeffs, std::span<double> out) {
    const KernelTable& k = active();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0.0) {
            k.axpy(coeffs[i], matrix.data() + i * cols, out.data(), cols);
        }
    }
}

}  // namespace fairshift::kernels
