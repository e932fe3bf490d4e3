#pragma once

#include <optional>
#include <string>
#include <vector>

#include "normsol/field.hpp"
#include "normsol/nonlinearity.hpp"
#include "normsol/thresholds.hpp"

namespace normsol {

/// M(u) = |grad u|_2^2 - (N/2) integral H(u); zero on every solution.
double M_functional(const NonlinearityModel& model, const RadialField& u);

struct Projection {
  double r = 1.0;           // dilation factor of eq-projection u(r .)
  RadialField field;        // u(r .), satisfies M = 0 up to quadrature
  double mass_after = 0.0;  // r^{-N/2} mass(u)
};

/// Dilation projection onto {M = 0}: r(u) = (N integral H(u) / (2 |grad u|^2))^{1/2}.
/// Throws SolverError when integral H(u) <= 0.
Projection project_to_M(const NonlinearityModel& model, const RadialField& u);

/// d^2/ds^2 J(s*u) at s=1 for u in M: (N^2/4)(2_# int H(u) - int h(u)u).
/// Throws SpecError when |M(u)| exceeds tol * |grad u|^2.
double phi_second_derivative_at_1(const NonlinearityModel& model,
                                  const RadialField& u, double tol = 1e-6);

enum class MClass { minus, zero, plus };
const char* to_string(MClass c);

/// Sign classification of the second fibering derivative with a dead band of
/// 1e-8 |grad u|^2 mapped to M_0.
MClass classify(const NonlinearityModel& model, const RadialField& u,
                double m_tol = 1e-6);

/// Scale-invariant data of u entering phi(s) = J(s * u): evaluating the map
/// needs only |grad u|^2 and the profile, never an interpolated rescale.
class FiberMap {
 public:
  FiberMap(const NonlinearityModel& model, const RadialField& u);
  double phi(double s) const;     // J(s * u)
  double dphi(double s) const;    // M(s * u) / s
  double d2phi(double s) const;   // |grad u|^2 - (N^2/4) s^{-N-2} int G(s^{N/2} u)
  double M_at(double s) const;    // M(s * u)
  double grad_sq() const { return grad_sq_; }

 private:
  const NonlinearityModel* model_;
  const RadialField* u_;
  double grad_sq_;
  int N_;
};

struct FiberPoint {
  double s = 0.0, phi = 0.0, dphi = 0.0, d2phi = 0.0;
};

struct FiberScan {
  std::vector<FiberPoint> points;
  std::vector<double> local_max, local_min;  // refined critical points
  std::optional<double> t_u;                 // unique local maximum, if J1 holds
  bool j1 = false;
  bool j2 = false;         // centered-difference concavity for s > t_u
  double j2_worst = 0.0;   // largest second difference found past t_u
  std::optional<MClass> class_at_1;  // set when u lies on M
};

/// Samples phi on a log grid, locates critical points from the analytic
/// derivative, refines maxima by golden section, and runs the J1/J2 checks.
FiberScan fiber_scan(const NonlinearityModel& model, const RadialField& u,
                     double s_lo = 1e-3, double s_hi = 1e2, int n_s = 400);

struct DescartesTerm {
  long long exp_num = 0, exp_den = 1;  // exponent of t in P, exact
  double exponent = 0.0;
  double coefficient = 0.0;
  int sign = 0;
};

struct DescartesCertificate {
  bool numeric_only = false;  // irrational exponents: no exact certificate
  long long m = 1;            // lcm of the exponent denominators
  std::vector<DescartesTerm> terms;          // ascending exponent
  int sign_changes = 0;                      // of phi' ~ P(t), t = s^{1/m}
  int max_positive_roots = 0;                // Descartes bound for phi'
  bool at_most_two = false;
  std::vector<int> curvature_pattern;        // signs of the phi'' terms
  int curvature_sign_changes = 0;
  bool j2_certified = false;  // pattern +..+-..- or -..-+-..-
  std::string small_s_shape;  // "convex" / "concave" near s = 0+
};

struct FiberNorms {
  double grad_sq = 0.0;
  std::vector<double> sub_q;  // |u|_{q_k}^{q_k}
  std::vector<double> sup_p;  // |u|_{p_l}^{p_l}
};

FiberNorms fiber_norms(const MultiPowerSpec& spec, const RadialField& u);

/// Exact sign-change count of the polynomial P with phi'(s) = s^{-1} P(s^{1/m})
/// for a multi-power model, plus the phi'' curvature pattern classified
/// against the convexity threshold 2 + 2/N.
DescartesCertificate descartes_certificate(const MultiPowerSpec& spec, int N,
                                           const FiberNorms& norms);

/// Positive lower bound for |grad u|_2 on M_- within mass rho, from the
/// Gagliardo-Nirenberg chain (returns 0 when no bound can be derived).
double grad_floor_Mminus(const NonlinearityModel& model,
                         const GeometryReport& geom, double rho);

struct MemptyGuard {
  double C = 0.0;          // constant of H1 <= C (t^2 + |t|^a)
  double rho_bound = 0.0;  // masses below this keep M_0 empty
  double A = 0.0, B = 0.0; // the from-above query at rho_bound
};

/// Sufficient smallness bound on rho for M_0 and D_rho to be disjoint,
/// reported with the constants it was derived from. user_C overrides the
/// model-derived growth constant.
MemptyGuard mempty_guard(const NonlinearityModel& model,
                         const GeometryReport& geom,
                         std::optional<double> user_C = std::nullopt);

}  // namespace normsol
