#pragma once

#include <optional>
#include <vector>

#include "normsol/field.hpp"
#include "normsol/solver.hpp"

namespace normsol {

// The integrated convention is i d/dt Psi + Lap Psi + f(Psi) = 0, under which
// Psi = u e^{i lambda t} is a standing wave whenever -Lap u + lambda u = f(u)
// and the virial weight satisfies V'' = 8 M(Psi).

struct EvolveOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 1;
  double energy_tol = 1e-6;        // per-run drift tolerance
  double step_error_factor = 100;  // one-step drift beyond this errors out
  double blowup_factor = 1e3;      // gradient ceiling relative to the start
  bool detect_blowup = true;
};

struct TraceRow {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad = 0.0;
  double V = 0.0;  // virial weight
  double M = 0.0;  // Nehari-Pohozaev functional
  double dist = 0.0;  // orbital distance to the reference, if any
};

struct EvolutionTrace {
  std::vector<TraceRow> rows;
  bool blown_up = false;
  double blowup_time = 0.0;
  bool step_error = false;
  double suggested_dt = 0.0;
  double mass_drift = 0.0;    // max relative drift over the run
  double energy_drift = 0.0;  // max absolute drift over the run

  /// Centered second difference of the V series at recorded index i.
  double d2V(std::size_t i) const;
  /// Centered first difference of the V series at recorded index i.
  double dV(std::size_t i) const;
};

/// Strang splitting: exact nonlinear phase rotation half-steps around a
/// Crank-Nicolson solve of the radial Laplacian. Requires an odd model.
EvolutionTrace evolve(const NonlinearityModel& model, const RadialField& psi0,
                      const EvolveOptions& opts,
                      const RadialField* reference = nullptr);

/// min over the phase of the H^1 distance between e^{i theta} psi and the
/// (real) reference; translations are not quotiented out.
double orbital_distance(const RadialField& psi, const RadialField& reference);

struct StabilityReport {
  double eps = 0.0;
  double horizon = 0.0;
  double sup_distance = 0.0;
  double max_grad = 0.0;
  double R0 = 0.0;
  bool grad_stayed_below_R0 = false;
  bool in_well = false;  // J(psi0) < 0, i.e. the perturbed datum is in the well
  bool blown_up = false;
  double initial_energy = 0.0;
  EvolutionTrace trace;
};

/// Evolves a seeded smooth perturbation of the local minimizer, renormalized
/// to mass rho, and reports the orbital-distance excursion.
StabilityReport stability_probe(const NonlinearityModel& model,
                                const GroundStateResult& ground, double eps,
                                double horizon, double dt, unsigned seed);

struct BlowupReport {
  double s = 1.0;
  double delta = 0.0;   // inf_{M_-} J - J(s * u)
  double V0 = 0.0, Vp0 = 0.0;
  double t_star = 0.0;  // positive root of V0 + Vp0 t - 4 delta t^2
  bool blown_up = false;
  double detection_time = 0.0;
  bool m_bound_held = false;  // M(Psi(t)) <= -delta + tol up to detection
  double worst_m_violation = 0.0;
  double m_initial = 0.0;  // M(s * u), negative for s > 1
  EvolutionTrace trace;
};

/// Evolves s * u for the strong-instability probe: computes the virial
/// majorant and its root t_star, runs until the gradient ceiling or 2 t_star,
/// and checks M(Psi(t)) <= -delta + tol along the way.
BlowupReport blowup_probe(const NonlinearityModel& model,
                          const GroundStateResult& excited, double s, double dt,
                          double m_tol = 1e-4);

}  // namespace normsol
