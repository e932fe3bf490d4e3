#include "normsol/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "normsol/kernels.hpp"
#include "normsol/log.hpp"

namespace normsol {

namespace {

using Vec = std::vector<double>;

double wdot(const RadialGrid& g, const Vec& x, const Vec& y) {
  return kernels::dot3(g.weights().data(), x.data(), y.data(), x.size());
}

// (I - Lap)^{-1} rhs with the flux-form Laplacian; SPD in the weighted inner
// product, so the preconditioned direction keeps descent geometry.
Vec precondition(const RadialGrid& g, const Vec& rhs) {
  const int n = g.size();
  const auto& fw = g.face_weights();
  const auto& w = g.weights();
  Vec lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), x = rhs;
  for (int i = 0; i < n; ++i) {
    const double fl = i > 0 ? fw[i - 1] : 0.0;
    const double fr = i + 1 < n ? fw[i] : g.wall_face_weight();
    diag[i] = 1.0 + (fl + fr) / w[i];
    if (i > 0) lower[i] = -fl / w[i];
    if (i + 1 < n) upper[i] = -fr / w[i];
  }
  solve_tridiagonal(lower, diag, upper, x);
  return x;
}

Vec energy_gradient(const NonlinearityModel& model, const RadialField& u) {
  RadialField lap = laplacian(u);
  const int n = u.size();
  Vec g(n);
  for (int i = 0; i < n; ++i) g[i] = -lap.re()[i] - model.f(u.re()[i]);
  return g;
}

RadialField with_mass(const RadialField& u, double rho) {
  const double m = mass(u);
  if (!(m > 0.0)) throw SolverError("cannot normalize a zero field");
  return (rho / m) * u;
}

RadialField initial_negative_energy_guess(const NonlinearityModel& model,
                                          double rho, const GridPtr& grid) {
  // Widening mass-preserving rescales of a Gaussian; by the small-s behaviour
  // of J(s * u) a wide enough member has negative energy.
  double sigma = 1.0;
  RadialField best = with_mass(RadialField::gaussian(grid, sigma, 1.0), rho);
  while (sigma < grid->r_max() / 8.0) {
    if (energy(model, best) < 0.0) return best;
    sigma *= 1.5;
    best = with_mass(RadialField::gaussian(grid, sigma, 1.0), rho);
  }
  if (energy(model, best) < 0.0) return best;
  throw SolverError(
      "could not construct a negative-energy initial state; grid radius "
      "may be too small for this mass");
}

}  // namespace

double lagrange_multiplier(const NonlinearityModel& model,
                           const RadialField& u) {
  const double m2 = mass_squared(u);
  if (!(m2 > 0.0)) throw SpecError("lagrange_multiplier requires u != 0");
  const double Ifu =
      integral_of([&](double t) { return model.f(t) * t; }, u);
  return (Ifu - grad_norm_squared(u)) / m2;
}

Residuals compute_residuals(const NonlinearityModel& model,
                            const RadialField& u, double lambda) {
  Residuals r;
  const auto& g = *u.grid();
  const double unorm = std::sqrt(h1_norm_squared(u));
  if (!(unorm > 0.0)) return r;

  RadialField lap = laplacian(u);
  Vec res(u.size());
  for (int i = 0; i < u.size(); ++i)
    res[i] = -lap.re()[i] + lambda * u.re()[i] - model.f(u.re()[i]);
  r.pde = std::sqrt(wdot(g, res, res)) / unorm;

  const double g2 = grad_norm_squared(u);
  const double m2 = mass_squared(u);
  const double Ifu = integral_of([&](double t) { return model.f(t) * t; }, u);
  const double IF = integral_of([&](double t) { return model.F(t); }, u);
  const double sc = sobolev_critical(model.dim());

  const double nehari_num = g2 + lambda * m2 - Ifu;
  const double nehari_scale =
      std::max({g2, std::fabs(lambda) * m2, std::fabs(Ifu), 1e-300});
  r.nehari = std::fabs(nehari_num) / nehari_scale;

  const double poho_num = g2 - sc * (IF - 0.5 * lambda * m2);
  const double poho_scale =
      std::max({g2, sc * std::fabs(IF), 0.5 * sc * std::fabs(lambda) * m2,
                1e-300});
  r.pohozaev = std::fabs(poho_num) / poho_scale;
  return r;
}

GroundStateResult minimize_local(const NonlinearityModel& model, double rho,
                                 GridPtr grid, const SolveOptions& opts) {
  if (!(rho > 0.0)) throw SpecError("rho must be positive");
  GroundStateResult out;
  out.branch = Branch::local_min;
  out.geometry = compute_geometry(model, rho);
  if (!out.geometry.has_threshold)
    throw SolverError("rho^2 exceeds the threshold; no well geometry");
  const double R0 = out.geometry.R0;
  const double guard = R0 * (1.0 - opts.r0_guard_frac);
  const auto& g = *grid;

  RadialField u = opts.initial ? with_mass(*opts.initial, rho)
                               : initial_negative_energy_guess(model, rho, grid);
  if (grad_norm(u) >= guard)
    throw SolverError("initial state already at the gradient guard");

  double J = energy(model, u);
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    Vec grad = energy_gradient(model, u);
    const double m2 = mass_squared(u);
    const double lam_est = wdot(g, grad, u.re()) / m2;
    Vec gt = grad;
    kernels::axpy(-lam_est, u.re().data(), gt.data(), gt.size());

    const double resid = std::sqrt(wdot(g, gt, gt));
    const double scale = std::max(1.0, std::sqrt(h1_norm_squared(u)));
    if (resid <= opts.grad_tol * scale) break;

    Vec d = precondition(g, gt);
    const double du = wdot(g, d, u.re()) / m2;
    kernels::axpy(-du, u.re().data(), d.data(), d.size());
    double dec = wdot(g, gt, d);
    if (dec <= 0.0) {
      d = gt;
      dec = resid * resid;
    }

    double tau = opts.tau0;
    bool accepted = false;
    while (tau > 1e-16) {
      RadialField trial = u;
      kernels::axpy(-tau, d.data(), trial.mutable_re().data(), trial.size());
      trial = with_mass(trial, rho);
      const double Jt = energy(model, trial);
      if (Jt <= J - 1e-4 * tau * dec) {
        u = std::move(trial);
        J = Jt;
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      if (resid <= 1e2 * opts.grad_tol * scale) break;  // flat to roundoff
      throw SolverError("minimize_local: line search stalled at iteration " +
                        std::to_string(it) + " (residual " +
                        std::to_string(resid) + ")");
    }
    const double gn = grad_norm(u);
    if (gn >= guard) {
      std::ostringstream os;
      os << "minimize_local escaped the well: |grad u| = " << gn
         << " reached the guard " << guard << " (R0 = " << R0
         << ") at iteration " << it << ", J = " << J;
      throw SolverError(os.str());
    }
    if (opts.verbose && it % 200 == 0)
      log::info("local it=%d J=%.12f resid=%.3e", it, J, resid);
  }

  out.iterations = it;
  out.converged = it < opts.max_iterations;
  if (integral_of([](double t) { return t; }, u) < 0.0) u = -1.0 * u;
  out.field = u;
  out.lambda = lagrange_multiplier(model, u);
  out.energy = energy(model, u);
  out.mass = mass(u);
  out.grad_norm = grad_norm(u);
  out.residuals = compute_residuals(model, u, out.lambda);
  return out;
}

namespace {

// Rearrange / clamp mass / reproject onto M; the final step is always the
// dilation projection so accepted iterates satisfy M = 0 to quadrature.
RadialField reproject(const NonlinearityModel& model, const RadialField& in,
                      double rho) {
  RadialField u = in;
  if (model.odd()) u = rearrange_decreasing(u);
  for (int pass = 0; pass < 8; ++pass) {
    const double m = mass(u);
    if (m > rho) u = (rho / m) * u;
    Projection p = project_to_M(model, u);
    u = std::move(p.field);
    if (mass(u) <= rho * (1.0 + 1e-12)) break;
  }
  return u;
}

}  // namespace

GroundStateResult minimize_on_Mminus(const NonlinearityModel& model, double rho,
                                     GridPtr grid, const SolveOptions& opts) {
  if (!(rho > 0.0)) throw SpecError("rho must be positive");
  GroundStateResult out;
  out.branch = Branch::m_minus;
  out.geometry = compute_geometry(model, rho);
  const auto& g = *grid;
  const int N = model.dim();

  const MemptyGuard guard = mempty_guard(model, out.geometry);
  if (guard.rho_bound > 0.0 && rho > guard.rho_bound)
    log::info("minimize_on_Mminus: rho=%.6g above the certified M0-free bound "
              "%.6g; relying on the runtime M0 check",
              rho, guard.rho_bound);

  RadialField u = opts.initial
                      ? reproject(model, with_mass(*opts.initial, rho), rho)
                      : reproject(model,
                                  with_mass(RadialField::gaussian(grid, 1.5, 1.0),
                                            rho),
                                  rho);

  auto check_class = [&](const RadialField& v) {
    const MClass c = classify(model, v);
    if (c == MClass::zero)
      throw SolverError(
          "minimize_on_Mminus: M0 encountered; rho too large for the "
          "certified geometry (bound " +
          std::to_string(guard.rho_bound) + ")");
    return c;
  };
  if (check_class(u) == MClass::plus)
    throw SolverError("minimize_on_Mminus: initial iterate lands on M+");

  double J = energy(model, u);
  int stall = 0;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    Vec grad = energy_gradient(model, u);

    // constraint gradients: M'(u) pointwise and the sphere direction u
    RadialField lap = laplacian(u);
    Vec cM(u.size());
    for (int i = 0; i < u.size(); ++i)
      cM[i] = -2.0 * lap.re()[i] - 0.5 * N * model.h(u.re()[i]);
    const bool sphere_active = mass(u) >= rho * (1.0 - 1e-10);

    auto project_tangent = [&](Vec& v) {
      const double mm = wdot(g, cM, cM);
      if (sphere_active) {
        const double ms = wdot(g, cM, u.re());
        const double ss = wdot(g, u.re(), u.re());
        const double vm = wdot(g, v, cM), vs = wdot(g, v, u.re());
        const double det = mm * ss - ms * ms;
        if (std::fabs(det) > 1e-30 * mm * ss) {
          const double al = (vm * ss - vs * ms) / det;
          const double be = (vs * mm - vm * ms) / det;
          kernels::axpy(-al, cM.data(), v.data(), v.size());
          kernels::axpy(-be, u.re().data(), v.data(), v.size());
          return;
        }
      }
      if (mm > 0.0) kernels::axpy(-wdot(g, v, cM) / mm, cM.data(), v.data(), v.size());
    };

    Vec gt = grad;
    project_tangent(gt);
    const double resid = std::sqrt(wdot(g, gt, gt));
    const double scale = std::max(1.0, std::sqrt(h1_norm_squared(u)));
    if (resid <= opts.grad_tol * scale) break;

    Vec d = precondition(g, gt);
    project_tangent(d);
    double dec = wdot(g, gt, d);
    if (dec <= 0.0) {
      d = gt;
      dec = resid * resid;
    }

    double tau = opts.tau0;
    bool accepted = false;
    while (tau > 1e-14) {
      RadialField step = u;
      kernels::axpy(-tau, d.data(), step.mutable_re().data(), step.size());
      RadialField trial;
      try {
        trial = reproject(model, step, rho);
      } catch (const SolverError&) {
        tau *= 0.5;  // projection left the H > 0 cone; shorten
        continue;
      }
      const double Jt = energy(model, trial);
      if (Jt <= J - 1e-4 * tau * dec && check_class(trial) == MClass::minus) {
        u = std::move(trial);
        if (std::fabs(Jt - J) <= opts.j_stall_tol * (1.0 + std::fabs(J)))
          ++stall;
        else
          stall = 0;
        J = Jt;
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      if (resid <= 1e3 * opts.grad_tol * scale) break;
      throw SolverError("minimize_on_Mminus: line search stalled at iteration " +
                        std::to_string(it));
    }
    if (stall >= 8) break;
    if (opts.verbose && it % 100 == 0)
      log::info("M- it=%d J=%.12f resid=%.3e", it, J, resid);
  }

  out.iterations = it;
  out.converged = it < opts.max_iterations;
  out.classification = check_class(u);
  if (out.classification == MClass::plus)
    throw SolverError("minimize_on_Mminus: converged iterate classifies as M+");
  out.field = u;
  out.lambda = lagrange_multiplier(model, u);
  out.energy = energy(model, u);
  out.mass = mass(u);
  out.grad_norm = grad_norm(u);
  out.residuals = compute_residuals(model, u, out.lambda);
  return out;
}

std::vector<MCurveRow> m_curve(const NonlinearityModel& model,
                               const std::vector<double>& rhos, GridPtr grid,
                               const SolveOptions& opts, int jobs) {
  std::vector<MCurveRow> rows(rhos.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rhos.size()) return;
      MCurveRow& row = rows[i];
      row.rho = rhos[i];
      try {
        GroundStateResult r = minimize_local(model, rhos[i], grid, opts);
        row.m = r.energy;
        row.R0 = r.geometry.R0;
        row.iterations = r.iterations;
        row.ok = r.converged;
        if (!r.converged) row.error = "not converged";
      } catch (const Error& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(jobs, rhos.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace normsol
