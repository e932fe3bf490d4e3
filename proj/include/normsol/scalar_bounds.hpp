#pragma once

#include "normsol/errors.hpp"

namespace normsol {

struct FromAboveResult {
  bool admissible = false;  // B (sqrt(A) + 1/2)^p <= sqrt(A) + 1/4
  double bound = 0.0;       // sqrt(A) + 1/2
  double t1 = 0.0;          // unique positive root of t^2 - A - B t^p
  double t0 = 0.0;          // turning point (p B / 2)^{1/(2-p)}
};

/// If x > 0 satisfies x^2 <= A + B x^p with p in (0,2) and the admissibility
/// condition holds, then x <= sqrt(A) + 1/2. Returns the certified bound and
/// the root t1 of the defining equation (asserted <= bound when admissible).
FromAboveResult bound_from_above(double A, double B, double p);

struct FromBelowResult {
  double xi = 0.0;     // min{1, (A+B)^{1/(2-p)}}
  double x_min = 0.0;  // smallest positive solution of x^2 = A x^p + B x^q
};

/// If x > 0 satisfies x^2 <= A x^p + B x^q with 2 < p < q, then
/// x >= min{1, (A+B)^{1/(2-p)}}.
FromBelowResult bound_from_below(double A, double B, double p, double q);

}  // namespace normsol
