#pragma once

// Dense double-precision inner loops used by the model, the inner LP setup and
// K-means. Every kernel has a scalar reference implementation; AVX2 (x86-64)
// and NEON (aarch64) variants are selected at runtime when the CPU supports
// them. Variants are equivalent up to floating-point reassociation, and a given
// ISA always produces bit-identical results for identical inputs.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace fairshift::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();

// Returns nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* table_for(Isa isa);

// All variants usable on this machine, scalar first.
std::vector<Isa> available_isas();

// The table in use. Chosen on first call: FAIRSHIFT_ISA=scalar|avx2|neon in
// the environment forces a variant, otherwise the widest supported one wins.
const KernelTable& active();

// Overrides the active table; throws std::invalid_argument if unavailable.
void select(Isa isa);

Isa parse_isa(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return active().squared_distance(a.data(), b.data(), a.size());
}

// out[i] = <row i of the row-major matrix, x>
void matvec(std::span<const double> matrix, std::size_t cols, std::span<const double> x,
            std::span<double> out);

// out += sum_i coeffs[i] * (row i), rows with a zero coefficient are skipped.
void matvec_transposed_accumulate(std::span<const double> matrix, std::size_t cols,
                                  std::span<const double> coeffs, std::span<double> out);

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
double squared_distance_scalar(const double* a, const double* b, std::size_t n);
#if defined(FAIRSHIFT_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
double squared_distance_avx2(const double* a, const double* b, std::size_t n);
#endif
#if defined(FAIRSHIFT_HAVE_NEON)
double dot_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
double squared_distance_neon(const double* a, const double* b, std::size_t n);
#endif
}  // namespace detail

}  // namespace fairshift::kernels
