#pragma once

#include <optional>
#include <string>
#include <vector>

#include "normsol/fibering.hpp"

namespace normsol {

struct SolveOptions {
  int max_iterations = 40000;
  double grad_tol = 1e-8;        // projected-gradient norm, relative
  double j_stall_tol = 1e-10;    // relative energy stall (M_- branch)
  double m_tol = 1e-8;           // |M| tolerance relative to |grad u|^2
  double tau0 = 0.1;             // initial Armijo step
  double r0_guard_frac = 1e-3;   // abort margin below R0 (local branch)
  std::optional<RadialField> initial;  // overrides the built-in guess
  bool verbose = false;
};

struct Residuals {
  double pde = 0.0;       // |(-Lap + lambda) u - f(u)|_2 / ||u||_{H^1}
  double nehari = 0.0;    // Nehari defect, relative
  double pohozaev = 0.0;  // Pohozaev defect, relative
};

enum class Branch { local_min, m_minus };

struct GroundStateResult {
  RadialField field;
  double lambda = 0.0;
  double energy = 0.0;
  double mass = 0.0;
  double grad_norm = 0.0;
  Residuals residuals;
  int iterations = 0;
  bool converged = false;
  Branch branch = Branch::local_min;
  MClass classification = MClass::minus;  // M_- branch only
  GeometryReport geometry;
};

/// lambda = (integral f(u) u - |grad u|^2) / |u|_2^2 (Nehari identity).
double lagrange_multiplier(const NonlinearityModel& model, const RadialField& u);

/// PDE / Nehari / Pohozaev defects of (u, lambda), each relative.
Residuals compute_residuals(const NonlinearityModel& model, const RadialField& u,
                            double lambda);

/// Negative-energy minimizer on the gradient-bounded disk: projected,
/// H^1-preconditioned descent on the mass sphere with an Armijo line search,
/// guarded against reaching |grad u| = R0.
GroundStateResult minimize_local(const NonlinearityModel& model, double rho,
                                 GridPtr grid, const SolveOptions& opts = {});

/// Positive-energy minimizer over M_- within mass rho: tangent descent with
/// rearrangement, mass clamp, and dilation reprojection each accepted step.
GroundStateResult minimize_on_Mminus(const NonlinearityModel& model, double rho,
                                     GridPtr grid, const SolveOptions& opts = {});

struct MCurveRow {
  double rho = 0.0;
  double m = 0.0;   // m_{R0}(rho)
  double R0 = 0.0;
  int iterations = 0;
  bool ok = false;
  std::string error;
};

/// minimize_local per mass, fanned out over `jobs` threads.
std::vector<MCurveRow> m_curve(const NonlinearityModel& model,
                               const std::vector<double>& rhos, GridPtr grid,
                               const SolveOptions& opts = {}, int jobs = 1);

}  // namespace normsol
