#pragma once

// Test-side oracles, independent of the library implementations they check:
// a high-resolution radial quadrature, a reference shooting integrator for
// -Lap w + lambda w = |w|^{q-2} w, and a plain bisection root finder.

#include <functional>
#include <vector>

namespace oracles {

/// integral_0^inf g(r) r^{N-1} dr |S^{N-1}| by composite Simpson on a log
/// grid; `intervals` controls the resolution.
double radial_integral(const std::function<double(double)>& g, int N,
                       double r_lo = 1e-7, double r_hi = 1e12,
                       int intervals = 480000);

/// Bisection for f(x) = 0 on [lo, hi] with a sign change; tol is absolute.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-14);

struct ShootingProfile {
  double h = 0.0;      // uniform step in r
  double theta = 0.0;  // w(0)
  std::vector<double> w, dw;
  double norm2 = 0.0, norm_grad = 0.0;  // |w|_2^2 and |grad w|_2^2
  double lp(double p, int N) const;     // |w|_p^p
  double value_at(double r) const;      // linear interpolation
};

/// Ground state of -Lap w + lambda w = |w|^{q-2} w in dimension N by RK4
/// shooting with bisection on w(0).
ShootingProfile shoot_ground_state(int N, double q, double lambda = 1.0,
                                   double r_max = 30.0, double h = 2.5e-4);

}  // namespace oracles
