#include "normsol/scalar_bounds.hpp"

#include <cmath>

namespace normsol {

namespace {

constexpr double kRootTol = 1e-14;

// Bisection of a continuous function with f(lo) and f(hi) of opposite signs.
template <typename F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= kRootTol * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FromAboveResult bound_from_above(double A, double B, double p) {
  if (!(p > 0.0 && p < 2.0)) throw SpecError("bound_from_above needs p in (0,2)");
  if (!(A > 0.0 && B > 0.0)) throw SpecError("bound_from_above needs A, B > 0");
  FromAboveResult out;
  out.bound = std::sqrt(A) + 0.5;
  out.admissible = B * std::pow(out.bound, p) <= std::sqrt(A) + 0.25;
  out.t0 = std::pow(0.5 * p * B, 1.0 / (2.0 - p));

  // f(t) = t^2 - A - B t^p is negative on (0, t1) and positive beyond; the
  // root lies right of the turning point t0.
  auto f = [&](double t) { return t * t - A - B * std::pow(t, p); };
  double hi = std::max(out.t0, 1.0);
  while (f(hi) <= 0.0) hi *= 2.0;
  out.t1 = bisect(f, out.t0, hi);
  if (out.admissible && out.t1 > out.bound + 1e-10 * out.bound)
    throw AccuracyError("bound_from_above: admissible query violates the bound");
  return out;
}

FromBelowResult bound_from_below(double A, double B, double p, double q) {
  if (!(2.0 < p && p < q)) throw SpecError("bound_from_below needs 2 < p < q");
  if (!(A > 0.0 && B > 0.0)) throw SpecError("bound_from_below needs A, B > 0");
  FromBelowResult out;
  out.xi = std::min(1.0, std::pow(A + B, 1.0 / (2.0 - p)));

  // f(t) = 1 - A t^{p-2} - B t^{q-2} decreases from 1 to -inf.
  auto f = [&](double t) {
    return 1.0 - A * std::pow(t, p - 2.0) - B * std::pow(t, q - 2.0);
  };
  double lo = 1.0, hi = 1.0;
  while (f(lo) <= 0.0) lo *= 0.5;
  while (f(hi) > 0.0) hi *= 2.0;
  out.x_min = bisect(f, lo, hi);
  if (out.x_min < out.xi * (1.0 - 1e-10))
    throw AccuracyError("bound_from_below: computed root violates the bound");
  return out;
}

}  // namespace normsol
