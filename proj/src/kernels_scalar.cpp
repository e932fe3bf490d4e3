#include "normsol/kernels.hpp"

namespace normsol::kernels::scalar {

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double dot3(const double* w, const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

double weighted_abs2(const double* w, const double* re, const double* im,
                     std::size_t n) {
  double acc = 0.0;
  if (im) {
    for (std::size_t i = 0; i < n; ++i)
      acc += w[i] * (re[i] * re[i] + im[i] * im[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * re[i] * re[i];
  }
  return acc;
}

double diff_energy(const double* c, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = x[i + 1] - x[i];
    acc += c[i] * d * d;
  }
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void rotate(double* re, double* im, const double* c, const double* s,
            std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = re[i], m = im[i];
    re[i] = r * c[i] - m * s[i];
    im[i] = r * s[i] + m * c[i];
  }
}

}  // namespace normsol::kernels::scalar
