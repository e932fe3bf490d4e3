#include <cstdlib>
#include <cstring>

#include "normsol/kernels.hpp"
#include "normsol/log.hpp"

namespace normsol::kernels {

namespace {

Isa pick_isa() {
  const char* e = std::getenv("NORMSOL_SIMD");
  if (e && !std::strcmp(e, "scalar")) return Isa::scalar;
  if (e && !std::strcmp(e, "avx2")) {
    if (avx2::available()) return Isa::avx2;
    log::warn("NORMSOL_SIMD=avx2 requested but CPU lacks AVX2+FMA; using scalar");
    return Isa::scalar;
  }
  return avx2::available() ? Isa::avx2 : Isa::scalar;
}

const Isa g_isa = pick_isa();

}  // namespace

Isa active_isa() { return g_isa; }

const char* isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

double sum(const double* x, std::size_t n) {
  return g_isa == Isa::avx2 ? avx2::sum(x, n) : scalar::sum(x, n);
}

double dot(const double* x, const double* y, std::size_t n) {
  return g_isa == Isa::avx2 ? avx2::dot(x, y, n) : scalar::dot(x, y, n);
}

double dot3(const double* w, const double* x, const double* y, std::size_t n) {
  return g_isa == Isa::avx2 ? avx2::dot3(w, x, y, n) : scalar::dot3(w, x, y, n);
}

double weighted_abs2(const double* w, const double* re, const double* im,
                     std::size_t n) {
  return g_isa == Isa::avx2 ? avx2::weighted_abs2(w, re, im, n)
                            : scalar::weighted_abs2(w, re, im, n);
}

double diff_energy(const double* c, const double* x, std::size_t n) {
  return g_isa == Isa::avx2 ? avx2::diff_energy(c, x, n)
                            : scalar::diff_energy(c, x, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  g_isa == Isa::avx2 ? avx2::axpy(a, x, y, n) : scalar::axpy(a, x, y, n);
}

void scal(double a, double* x, std::size_t n) {
  g_isa == Isa::avx2 ? avx2::scal(a, x, n) : scalar::scal(a, x, n);
}

void rotate(double* re, double* im, const double* c, const double* s,
            std::size_t n) {
  g_isa == Isa::avx2 ? avx2::rotate(re, im, c, s, n)
                     : scalar::rotate(re, im, c, s, n);
}

}  // namespace normsol::kernels
