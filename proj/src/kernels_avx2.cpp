#include "normsol/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define NORMSOL_X86 1
#include <immintrin.h>
#else
#define NORMSOL_X86 0
#endif

namespace normsol::kernels::avx2 {

#if NORMSOL_X86

bool available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {
inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}
}  // namespace

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

double dot3(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += w[i] * x[i] * y[i];
  return r;
}

double weighted_abs2(const double* w, const double* re, const double* im,
                     std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  if (im) {
    for (; i + 4 <= n; i += 4) {
      __m256d r = _mm256_loadu_pd(re + i);
      __m256d m = _mm256_loadu_pd(im + i);
      __m256d a2 = _mm256_fmadd_pd(m, m, _mm256_mul_pd(r, r));
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), a2, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += w[i] * (re[i] * re[i] + im[i] * im[i]);
    return r;
  }
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_loadu_pd(re + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(r, r), _mm256_loadu_pd(w + i), acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += w[i] * re[i] * re[i];
  return r;
}

double diff_energy(const double* c, const double* x, std::size_t n) {
  if (n < 2) return 0.0;
  const std::size_t faces = n - 1;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= faces; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i + 1), _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(d, d), _mm256_loadu_pd(c + i), acc);
  }
  double r = hsum(acc);
  for (; i < faces; ++i) {
    const double d = x[i + 1] - x[i];
    r += c[i] * d * d;
  }
  return r;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void rotate(double* re, double* im, const double* c, const double* s,
            std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_loadu_pd(re + i);
    __m256d m = _mm256_loadu_pd(im + i);
    __m256d cv = _mm256_loadu_pd(c + i);
    __m256d sv = _mm256_loadu_pd(s + i);
    _mm256_storeu_pd(re + i, _mm256_fmsub_pd(r, cv, _mm256_mul_pd(m, sv)));
    _mm256_storeu_pd(im + i, _mm256_fmadd_pd(r, sv, _mm256_mul_pd(m, cv)));
  }
  for (; i < n; ++i) {
    const double r = re[i], m = im[i];
    re[i] = r * c[i] - m * s[i];
    im[i] = r * s[i] + m * c[i];
  }
}

#else  // !NORMSOL_X86

bool available() { return false; }
double sum(const double* x, std::size_t n) { return scalar::sum(x, n); }
double dot(const double* x, const double* y, std::size_t n) {
  return scalar::dot(x, y, n);
}
double dot3(const double* w, const double* x, const double* y, std::size_t n) {
  return scalar::dot3(w, x, y, n);
}
double weighted_abs2(const double* w, const double* re, const double* im,
                     std::size_t n) {
  return scalar::weighted_abs2(w, re, im, n);
}
double diff_energy(const double* c, const double* x, std::size_t n) {
  return scalar::diff_energy(c, x, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) {
  scalar::axpy(a, x, y, n);
}
void scal(double a, double* x, std::size_t n) { scalar::scal(a, x, n); }
void rotate(double* re, double* im, const double* c, const double* s,
            std::size_t n) {
  scalar::rotate(re, im, c, s, n);
}

#endif

}  // namespace normsol::kernels::avx2
