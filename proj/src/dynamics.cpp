#include "normsol/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "normsol/kernels.hpp"
#include "normsol/log.hpp"

namespace normsol {

namespace {

using Cplx = std::complex<double>;

}  // namespace

double EvolutionTrace::d2V(std::size_t i) const {
  if (i == 0 || i + 1 >= rows.size()) return 0.0;
  const double h = rows[i + 1].t - rows[i].t;
  return (rows[i + 1].V - 2.0 * rows[i].V + rows[i - 1].V) / (h * h);
}

double EvolutionTrace::dV(std::size_t i) const {
  if (rows.size() < 2) return 0.0;
  if (i == 0) {
    const double h = rows[1].t - rows[0].t;
    if (rows.size() < 3) return (rows[1].V - rows[0].V) / h;
    return (-3.0 * rows[0].V + 4.0 * rows[1].V - rows[2].V) / (2.0 * h);
  }
  if (i + 1 >= rows.size()) {
    const double h = rows[i].t - rows[i - 1].t;
    return (rows[i].V - rows[i - 1].V) / h;
  }
  return (rows[i + 1].V - rows[i - 1].V) / (rows[i + 1].t - rows[i - 1].t);
}

namespace {

void record(EvolutionTrace& tr, const NonlinearityModel& model,
            const RadialField& psi, double t, const RadialField* ref) {
  TraceRow row;
  row.t = t;
  row.mass = mass(psi);
  row.energy = energy(model, psi);
  row.grad = grad_norm(psi);
  row.V = virial_weight(psi);
  row.M = M_functional(model, psi);
  if (ref) row.dist = orbital_distance(psi, *ref);
  tr.rows.push_back(row);
}

}  // namespace

EvolutionTrace evolve(const NonlinearityModel& model, const RadialField& psi0,
                      const EvolveOptions& opts, const RadialField* reference) {
  if (!model.odd())
    throw SpecError("evolve requires an odd nonlinearity (complex extension)");
  if (!(opts.dt > 0.0) || !(opts.t_end > 0.0))
    throw SpecError("evolve requires positive dt and t_end");

  const auto& g = *psi0.grid();
  const int n = g.size();
  RadialField psi = psi0.as_complex();
  auto& re = psi.mutable_re();
  auto& im = psi.mutable_im();

  // Tridiagonal rows of (I -+ i dt/2 Lap).
  const auto& fw = g.face_weights();
  const auto& w = g.weights();
  std::vector<double> offl(n), offr(n), offc(n);
  for (int i = 0; i < n; ++i) {
    const double fl = i > 0 ? fw[i - 1] : 0.0;
    const double fr = i + 1 < n ? fw[i] : g.wall_face_weight();
    offl[i] = fl / w[i];
    offr[i] = i + 1 < n ? fw[i] / w[i] : 0.0;
    offc[i] = -(fl + fr) / w[i];
  }
  const Cplx ih(0.0, 0.5 * opts.dt);
  std::vector<Cplx> low0(n), dia0(n), upp0(n);
  for (int i = 0; i < n; ++i) {
    low0[i] = -ih * offl[i];
    dia0[i] = 1.0 - ih * offc[i];
    upp0[i] = -ih * offr[i];
  }

  std::vector<double> cosv(n), sinv(n), rhs_re(n), rhs_im(n);
  std::vector<Cplx> rhs(n), a(n), d(n), c(n);

  auto half_rotate = [&](double half_dt) {
    // i psi_t = -f(psi): the modulus is invariant, the phase advances by
    // theta(|psi|) half_dt with theta(r) = f(r)/r.
    for (int i = 0; i < n; ++i) {
      const double amp = std::hypot(re[i], im[i]);
      const double th = amp > 1e-300 ? model.f(amp) / amp * half_dt : 0.0;
      cosv[i] = std::cos(th);
      sinv[i] = std::sin(th);
    }
    kernels::rotate(re.data(), im.data(), cosv.data(), sinv.data(), n);
  };

  auto cn_step = [&] {
    for (int i = 0; i < n; ++i) {
      Cplx lap = offc[i] * Cplx(re[i], im[i]);
      if (i > 0) lap += offl[i] * Cplx(re[i - 1], im[i - 1]);
      if (i + 1 < n) lap += offr[i] * Cplx(re[i + 1], im[i + 1]);
      rhs[i] = Cplx(re[i], im[i]) + ih * lap;
    }
    a = low0;
    d = dia0;
    c = upp0;
    solve_tridiagonal(a, d, c, rhs);
    for (int i = 0; i < n; ++i) {
      re[i] = rhs[i].real();
      im[i] = rhs[i].imag();
    }
  };

  EvolutionTrace tr;
  record(tr, model, psi, 0.0, reference);
  const double mass0 = tr.rows.front().mass;
  const double energy0 = tr.rows.front().energy;
  const double grad0 = tr.rows.front().grad;
  const double grad_ceiling = opts.blowup_factor * std::max(grad0, 1e-12);

  const long steps = std::lround(opts.t_end / opts.dt);
  double prev_energy = energy0;
  for (long k = 0; k < steps; ++k) {
    half_rotate(0.5 * opts.dt);
    cn_step();
    half_rotate(0.5 * opts.dt);
    const double t = (k + 1) * opts.dt;

    const double gn = grad_norm(psi);
    if (opts.detect_blowup && gn > grad_ceiling) {
      record(tr, model, psi, t, reference);
      tr.blown_up = true;
      tr.blowup_time = t;
      break;
    }
    const double E = energy(model, psi);
    if (std::fabs(E - prev_energy) >
        opts.step_error_factor * opts.energy_tol * std::max(1.0, std::fabs(energy0))) {
      record(tr, model, psi, t, reference);
      tr.step_error = true;
      tr.suggested_dt = 0.25 * opts.dt;
      log::warn("evolve: one-step energy drift %.3e at t=%.4f exceeds the "
                "accuracy budget; suggest dt <= %.3e",
                std::fabs(E - prev_energy), t, tr.suggested_dt);
      break;
    }
    prev_energy = E;
    if ((k + 1) % opts.record_every == 0 || k + 1 == steps)
      record(tr, model, psi, t, reference);
  }

  for (const auto& row : tr.rows) {
    if (tr.blown_up && row.t >= tr.blowup_time) break;
    tr.mass_drift =
        std::max(tr.mass_drift, std::fabs(row.mass - mass0) / mass0);
    tr.energy_drift = std::max(tr.energy_drift, std::fabs(row.energy - energy0));
  }
  return tr;
}

double orbital_distance(const RadialField& psi, const RadialField& reference) {
  if (psi.grid() != reference.grid())
    throw SpecError("orbital_distance: fields on different grids");
  const auto& g = *psi.grid();
  const auto& w = g.weights();
  const auto& fw = g.face_weights();
  const int n = g.size();

  // ||e^{i th} psi - u||_{H1}^2 = ||psi||^2 + ||u||^2 - 2 Re e^{i th} <psi, u>;
  // the minimizing phase gives 2 |<psi, u>|.
  double inner_re = kernels::dot3(w.data(), psi.re().data(),
                                  reference.re().data(), n);
  double inner_im = psi.is_complex()
                        ? kernels::dot3(w.data(), psi.im().data(),
                                        reference.re().data(), n)
                        : 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double du = reference.re()[i + 1] - reference.re()[i];
    inner_re += fw[i] * (psi.re()[i + 1] - psi.re()[i]) * du;
    if (psi.is_complex())
      inner_im += fw[i] * (psi.im()[i + 1] - psi.im()[i]) * du;
  }
  const double p2 = h1_norm_squared(psi);
  const double u2 = h1_norm_squared(reference);
  const double d2 = p2 + u2 - 2.0 * std::hypot(inner_re, inner_im);
  return std::sqrt(std::max(0.0, d2));
}

StabilityReport stability_probe(const NonlinearityModel& model,
                                const GroundStateResult& ground, double eps,
                                double horizon, double dt, unsigned seed) {
  if (ground.branch != Branch::local_min)
    throw SpecError("stability_probe expects the local-min branch");
  const RadialField& u = ground.field;
  const GridPtr grid = u.grid();

  StabilityReport rep;
  rep.eps = eps;
  rep.horizon = horizon;
  rep.R0 = ground.geometry.R0;

  RadialField psi0 = u;
  if (eps > 0.0) {
    // smooth seeded perturbation: a few random radial Gaussian bumps
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> centre(0.0, 0.35 * grid->r_max());
    std::uniform_real_distribution<double> width(0.5, 2.0);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::vector<double> bump(grid->size(), 0.0);
    for (int k = 0; k < 5; ++k) {
      const double c0 = centre(rng), s0 = width(rng), a0 = amp(rng);
      for (int i = 0; i < grid->size(); ++i) {
        const double r = grid->nodes()[i];
        bump[i] += a0 * std::exp(-(r - c0) * (r - c0) / (2.0 * s0 * s0));
      }
    }
    RadialField pert = RadialField::real(grid, std::move(bump));
    const double scale =
        eps * std::sqrt(h1_norm_squared(u) / h1_norm_squared(pert));
    psi0 = add_scaled(u, scale, pert);
    psi0 = (ground.mass / mass(psi0)) * psi0;
  }

  rep.initial_energy = energy(model, psi0);
  rep.in_well = rep.initial_energy < 0.0;
  if (!rep.in_well)
    log::warn("stability_probe: perturbed datum has J >= 0 (out of the well); "
              "no stability claim");

  EvolveOptions eopt;
  eopt.dt = dt;
  eopt.t_end = horizon;
  eopt.record_every = std::max(1, static_cast<int>(0.05 / dt));
  rep.trace = evolve(model, psi0, eopt, &u);

  for (const auto& row : rep.trace.rows) {
    rep.sup_distance = std::max(rep.sup_distance, row.dist);
    rep.max_grad = std::max(rep.max_grad, row.grad);
  }
  rep.blown_up = rep.trace.blown_up;
  rep.grad_stayed_below_R0 = rep.max_grad < rep.R0 && !rep.blown_up;
  if (rep.blown_up)
    log::warn("stability_probe: blow-up flagged at t=%.4f (stability violation)",
              rep.trace.blowup_time);
  return rep;
}

BlowupReport blowup_probe(const NonlinearityModel& model,
                          const GroundStateResult& excited, double s, double dt,
                          double m_tol) {
  if (excited.branch != Branch::m_minus)
    throw SpecError("blowup_probe expects the M- branch");
  if (!(s > 1.0)) throw SpecError("blowup_probe requires s > 1");

  BlowupReport rep;
  rep.s = s;
  const RadialField psi0 = scale_star(s, excited.field);
  rep.m_initial = M_functional(model, psi0);

  rep.delta = excited.energy - energy(model, psi0);
  if (!(rep.delta > 0.0))
    throw SolverError("blowup_probe: J(s * u) is not below the M- level");
  rep.V0 = virial_weight(psi0);

  // run to 2 t_star computed with Vp0 = 0 first (the datum is real), then
  // refine Vp0 from the recorded series
  rep.t_star = std::sqrt(rep.V0 / (4.0 * rep.delta));

  EvolveOptions eopt;
  eopt.dt = dt;
  eopt.t_end = 2.0 * rep.t_star;
  eopt.record_every = 1;
  eopt.energy_tol = 1e-3;  // conservation is not the probe's concern
  eopt.step_error_factor = 1e12;
  rep.trace = evolve(model, psi0, eopt, nullptr);

  rep.Vp0 = rep.trace.dV(0);
  const double disc = rep.Vp0 * rep.Vp0 + 16.0 * rep.delta * rep.V0;
  rep.t_star = (rep.Vp0 + std::sqrt(disc)) / (8.0 * rep.delta);

  rep.blown_up = rep.trace.blown_up;
  rep.detection_time = rep.trace.blowup_time;

  rep.m_bound_held = true;
  for (const auto& row : rep.trace.rows) {
    if (rep.blown_up && row.t >= rep.detection_time) break;
    const double viol = row.M - (-rep.delta + m_tol);
    if (viol > 0.0) {
      rep.m_bound_held = false;
      rep.worst_m_violation = std::max(rep.worst_m_violation, viol);
    }
  }
  if (!rep.blown_up)
    log::warn("blowup_probe: no blow-up by 2 t* = %.4f (probe failed; see the "
              "V series in the trace)",
              2.0 * rep.t_star);
  return rep;
}

}  // namespace normsol
