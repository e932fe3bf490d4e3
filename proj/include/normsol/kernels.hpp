#pragma once

#include <cstddef>

// Array kernels behind the grid operations. Every kernel exists as a scalar
// reference implementation and, on x86-64, an AVX2/FMA variant. The top-level
// entry points dispatch once at startup based on CPU support; NORMSOL_SIMD
// (scalar|avx2|auto) overrides the choice. The two implementations are
// equivalence-tested against each other in the test suite.
namespace normsol::kernels {

enum class Isa { scalar, avx2 };

/// Instruction set selected by the dispatcher.
Isa active_isa();
const char* isa_name(Isa isa);

/// sum_i x[i]
double sum(const double* x, std::size_t n);
/// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);
/// sum_i w[i] * x[i] * y[i]
double dot3(const double* w, const double* x, const double* y, std::size_t n);
/// sum_i w[i] * (re[i]^2 + im[i]^2); im may be null for real data.
double weighted_abs2(const double* w, const double* re, const double* im,
                     std::size_t n);
/// sum_{i<n-1} c[i] * (x[i+1] - x[i])^2  (face-weighted squared differences)
double diff_energy(const double* c, const double* x, std::size_t n);
/// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);
/// x[i] *= a
void scal(double a, double* x, std::size_t n);
/// (re[i], im[i]) *= (c[i] + i s[i])  -- pointwise complex rotation
void rotate(double* re, double* im, const double* c, const double* s,
            std::size_t n);

namespace scalar {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* w, const double* x, const double* y, std::size_t n);
double weighted_abs2(const double* w, const double* re, const double* im,
                     std::size_t n);
double diff_energy(const double* c, const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
void rotate(double* re, double* im, const double* c, const double* s,
            std::size_t n);
}  // namespace scalar

// Compiled with -mavx2 -mfma in its own translation unit; call only when
// avx2_available() is true.
namespace avx2 {
bool available();
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* w, const double* x, const double* y, std::size_t n);
double weighted_abs2(const double* w, const double* re, const double* im,
                     std::size_t n);
double diff_energy(const double* c, const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
void rotate(double* re, double* im, const double* c, const double* s,
            std::size_t n);
}  // namespace avx2

}  // namespace normsol::kernels
