#include "normsol/fibering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "normsol/scalar_bounds.hpp"

namespace normsol {

double M_functional(const NonlinearityModel& model, const RadialField& u) {
  return grad_norm_squared(u) -
         0.5 * model.dim() *
             integral_of([&](double t) { return model.H(t); }, u);
}

namespace {

RadialField sample_dilated(const RadialField& u, double c) {
  // u(c x) on the same grid
  const auto& g = *u.grid();
  const int n = g.size();
  if (c < 1.0) {
    const double tail =
        std::fabs(interp_radial(u.re(), g.spacing(), c * g.r_max()));
    if (tail > 1e-8 * u.max_abs())
      throw AccuracyError("projection: dilated support exceeds the grid");
  }
  std::vector<double> re(n), im;
  for (int i = 0; i < n; ++i)
    re[i] = interp_radial(u.re(), g.spacing(), c * g.nodes()[i]);
  if (u.is_complex()) {
    im.resize(n);
    for (int i = 0; i < n; ++i)
      im[i] = interp_radial(u.im(), g.spacing(), c * g.nodes()[i]);
    return RadialField::complex(u.grid(), std::move(re), std::move(im));
  }
  return RadialField::real(u.grid(), std::move(re));
}

}  // namespace

Projection project_to_M(const NonlinearityModel& model, const RadialField& u) {
  const double IH = integral_of([&](double t) { return model.H(t); }, u);
  if (!(IH > 0.0))
    throw SolverError("project_to_M: integral of H(u) is not positive");
  const double g2 = grad_norm_squared(u);
  if (!(g2 > 0.0)) throw SolverError("project_to_M: zero field");
  Projection out;
  out.r = std::sqrt(0.5 * model.dim() * IH / g2);
  out.field = sample_dilated(u, out.r);
  out.mass_after = std::pow(out.r, -0.5 * model.dim()) * mass(u);
  return out;
}

double phi_second_derivative_at_1(const NonlinearityModel& model,
                                  const RadialField& u, double tol) {
  const double g2 = grad_norm_squared(u);
  if (std::fabs(M_functional(model, u)) > tol * g2)
    throw SpecError("phi_second_derivative_at_1 requires u on the manifold");
  const int N = model.dim();
  const double IH = integral_of([&](double t) { return model.H(t); }, u);
  const double Ihu = integral_of([&](double t) { return model.h(t) * t; }, u);
  return 0.25 * N * N * (mass_critical(N) * IH - Ihu);
}

const char* to_string(MClass c) {
  switch (c) {
    case MClass::minus: return "M-";
    case MClass::zero: return "M0";
    default: return "M+";
  }
}

MClass classify(const NonlinearityModel& model, const RadialField& u,
                double m_tol) {
  const double val = phi_second_derivative_at_1(model, u, m_tol);
  const double band = 1e-8 * grad_norm_squared(u);
  if (std::fabs(val) <= band) return MClass::zero;
  return val < 0.0 ? MClass::minus : MClass::plus;
}

FiberMap::FiberMap(const NonlinearityModel& model, const RadialField& u)
    : model_(&model), u_(&u), grad_sq_(grad_norm_squared(u)), N_(model.dim()) {
  if (model.dim() != u.grid()->dim())
    throw SpecError("model and field dimensions differ");
}

double FiberMap::phi(double s) const {
  const double sig = std::pow(s, 0.5 * N_);
  const double IF =
      integral_of([&](double t) { return model_->F(sig * t); }, *u_);
  return 0.5 * s * s * grad_sq_ - std::pow(s, -N_) * IF;
}

double FiberMap::M_at(double s) const {
  const double sig = std::pow(s, 0.5 * N_);
  const double IH =
      integral_of([&](double t) { return model_->H(sig * t); }, *u_);
  return s * s * grad_sq_ - 0.5 * N_ * std::pow(s, -N_) * IH;
}

double FiberMap::dphi(double s) const { return M_at(s) / s; }

double FiberMap::d2phi(double s) const {
  const double sig = std::pow(s, 0.5 * N_);
  const double IG =
      integral_of([&](double t) { return model_->G(sig * t); }, *u_);
  return grad_sq_ - 0.25 * N_ * N_ * std::pow(s, -N_ - 2.0) * IG;
}

namespace {

// Golden-section refinement of an extremum of fn inside [lo, hi].
double golden_refine(const std::function<double(double)>& fn, double lo,
                     double hi, bool maximize) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = fn(c), fd = fn(d);
  const double sgn = maximize ? 1.0 : -1.0;
  while (b - a > 1e-10 * std::max(1.0, a)) {
    if (sgn * fc > sgn * fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

FiberScan fiber_scan(const NonlinearityModel& model, const RadialField& u,
                     double s_lo, double s_hi, int n_s) {
  if (u.max_abs() == 0.0) throw SpecError("fiber_scan requires u != 0");
  FiberMap fm(model, u);
  FiberScan scan;
  scan.points.resize(n_s);
  const double lr = std::log(s_hi / s_lo);
  for (int i = 0; i < n_s; ++i) {
    const double s = s_lo * std::exp(lr * i / (n_s - 1));
    auto& p = scan.points[i];
    p.s = s;
    p.phi = fm.phi(s);
    p.dphi = fm.dphi(s);
    p.d2phi = fm.d2phi(s);
    if (!std::isfinite(p.phi) || !std::isfinite(p.dphi))
      throw AccuracyError("fiber_scan: phi not finite at s = " +
                          std::to_string(s));
  }

  auto phi_of = [&](double s) { return fm.phi(s); };
  for (int i = 0; i + 1 < n_s; ++i) {
    const double d0 = scan.points[i].dphi, d1 = scan.points[i + 1].dphi;
    if (d0 > 0.0 && d1 <= 0.0)
      scan.local_max.push_back(golden_refine(phi_of, scan.points[i].s,
                                             scan.points[i + 1].s, true));
    else if (d0 < 0.0 && d1 >= 0.0)
      scan.local_min.push_back(golden_refine(phi_of, scan.points[i].s,
                                             scan.points[i + 1].s, false));
  }
  scan.j1 = scan.local_max.size() == 1;
  if (scan.j1) scan.t_u = scan.local_max.front();

  // (J2): centered second differences with step = local grid spacing.
  if (scan.t_u) {
    scan.j2 = true;
    for (int i = 0; i + 1 < n_s; ++i) {
      const double s = scan.points[i].s;
      if (s <= *scan.t_u) continue;
      const double d = scan.points[i + 1].s - s;
      const double fd =
          (fm.phi(s + d) - 2.0 * scan.points[i].phi + fm.phi(s - d)) / (d * d);
      const double tol = 1e-7 * std::fabs(scan.points[i].phi) + 1e-12;
      scan.j2_worst = std::max(scan.j2_worst, fd);
      if (fd > tol) scan.j2 = false;
    }
  }

  const double g2 = fm.grad_sq();
  if (std::fabs(fm.M_at(1.0)) <= 1e-6 * g2)
    scan.class_at_1 = classify(model, u);
  return scan;
}

FiberNorms fiber_norms(const MultiPowerSpec& spec, const RadialField& u) {
  FiberNorms n;
  n.grad_sq = grad_norm_squared(u);
  for (const auto& t : spec.subcritical)
    n.sub_q.push_back(std::pow(lp_norm(u, t.q.value), t.q.value));
  for (const auto& t : spec.supercritical)
    n.sup_p.push_back(std::pow(lp_norm(u, t.q.value), t.q.value));
  return n;
}

namespace {

struct RatExp {
  long long num, den;  // reduced, den > 0
};

RatExp phi_exponent(int N, const Exponent& q) {
  // N(q-2)/2 as an exact fraction
  const long long num = N * (q.num - 2 * q.den);
  const long long den = 2 * q.den;
  const long long g = std::gcd(num < 0 ? -num : num, den);
  return RatExp{num / g, den / g};
}

int cmp_rat(const RatExp& a, const RatExp& b) {
  const __int128 l = static_cast<__int128>(a.num) * b.den;
  const __int128 r = static_cast<__int128>(b.num) * a.den;
  return l < r ? -1 : (l > r ? 1 : 0);
}

int count_sign_changes(const std::vector<int>& signs) {
  int changes = 0;
  int prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

DescartesCertificate descartes_certificate(const MultiPowerSpec& spec, int N,
                                           const FiberNorms& norms) {
  spec.validate(N);
  if (norms.sub_q.size() != spec.subcritical.size() ||
      norms.sup_p.size() != spec.supercritical.size() ||
      !(norms.grad_sq > 0.0))
    throw SpecError("descartes_certificate: norms do not match the spec");
  for (double v : norms.sub_q)
    if (!(v > 0.0)) throw SpecError("descartes_certificate: norms must be positive");
  for (double v : norms.sup_p)
    if (!(v > 0.0)) throw SpecError("descartes_certificate: norms must be positive");

  DescartesCertificate cert;
  const auto all_exact = [&] {
    for (const auto& t : spec.subcritical)
      if (!t.q.exact) return false;
    for (const auto& t : spec.supercritical)
      if (!t.q.exact) return false;
    return true;
  }();
  if (!all_exact) {
    cert.numeric_only = true;
    return cert;
  }

  struct Raw {
    RatExp e;
    double coef;
    double curv_coef;  // coefficient in the phi'' expansion
  };
  std::vector<Raw> raw;
  auto push_terms = [&](const std::vector<PowerTerm>& terms,
                        const std::vector<double>& nrm) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const RatExp e = phi_exponent(N, terms[i].q);
      const double ev = static_cast<double>(e.num) / e.den;
      const double c = -terms[i].coef / terms[i].q.value * ev * nrm[i];
      raw.push_back(Raw{e, c, c * (ev - 1.0)});
    }
  };
  push_terms(spec.subcritical, norms.sub_q);
  raw.push_back(Raw{RatExp{2, 1}, norms.grad_sq, norms.grad_sq});
  push_terms(spec.supercritical, norms.sup_p);

  long long m = 1;
  for (const auto& t : raw) m = std::lcm(m, t.e.den);
  if (m > (1LL << 40))
    throw SpecError("descartes_certificate: exponent denominators too large");
  cert.m = m;

  std::sort(raw.begin(), raw.end(),
            [](const Raw& a, const Raw& b) { return cmp_rat(a.e, b.e) < 0; });

  std::vector<int> p_signs, c_signs;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    // merge exactly equal exponents (cannot occur for valid specs)
    if (i > 0 && cmp_rat(raw[i].e, raw[i - 1].e) == 0) {
      cert.terms.back().coefficient += raw[i].coef;
      cert.terms.back().sign = cert.terms.back().coefficient > 0
                                   ? 1
                                   : (cert.terms.back().coefficient < 0 ? -1 : 0);
      p_signs.back() = cert.terms.back().sign;
      c_signs.back() += 0;  // curvature merge not needed for valid specs
      continue;
    }
    DescartesTerm t;
    t.exp_num = raw[i].e.num * (m / raw[i].e.den);
    t.exp_den = 1;
    t.exponent = static_cast<double>(raw[i].e.num) / raw[i].e.den;
    t.coefficient = raw[i].coef;
    t.sign = raw[i].coef > 0 ? 1 : (raw[i].coef < 0 ? -1 : 0);
    cert.terms.push_back(t);
    p_signs.push_back(t.sign);
    c_signs.push_back(raw[i].curv_coef > 0 ? 1
                                           : (raw[i].curv_coef < 0 ? -1 : 0));
  }

  cert.sign_changes = count_sign_changes(p_signs);
  cert.max_positive_roots = cert.sign_changes;
  cert.at_most_two = cert.sign_changes <= 2;

  cert.curvature_pattern = c_signs;
  cert.curvature_sign_changes = count_sign_changes(c_signs);
  int last = 0, first = 0;
  for (int s : c_signs)
    if (s != 0) last = s;
  for (auto it = c_signs.begin(); it != c_signs.end(); ++it)
    if (*it != 0) {
      first = *it;
      break;
    }
  cert.small_s_shape = first >= 0 ? "convex" : "concave";
  cert.j2_certified = last < 0 && cert.curvature_sign_changes >= 1 &&
                      cert.curvature_sign_changes <= 2;
  return cert;
}

double grad_floor_Mminus(const NonlinearityModel& model,
                         const GeometryReport& geom, double rho) {
  const int N = model.dim();
  const double mc = mass_critical(N), sc = sobolev_critical(N);
  const double a = model.a(), b = model.b();
  if (!(a < mc) || !(b > mc) || !(b < sc)) return 0.0;

  // c2 with H2 <= c2 (|t|^b + |t|^{2*}), estimated as a grid supremum.
  double c2 = 0.0;
  for (int i = 0; i <= 480; ++i) {
    const double t = 1e-6 * std::pow(10.0, 12.0 * i / 480.0);
    c2 = std::max(c2, model.H2(t) / (std::pow(t, b) + std::pow(t, sc)));
  }
  if (!(c2 > 0.0)) return 0.0;

  const double factor = 0.5 * N * (sc - a) / (mc - a) * c2;
  const double Cb = gn_constant(N, b).C;
  const double p = 0.5 * N * (b - 2.0);
  const double A = factor * std::pow(Cb, b) * std::pow(rho, b - p);
  const double B = factor * std::pow(geom.S, -0.5 * sc);
  return bound_from_below(A, B, p, sc).xi;
}

MemptyGuard mempty_guard(const NonlinearityModel& model,
                         const GeometryReport& geom,
                         std::optional<double> user_C) {
  MemptyGuard out;
  const int N = model.dim();
  const double mc = mass_critical(N), sc = sobolev_critical(N);
  const double a = model.a(), b = model.b();
  if (!(a > 2.0 && a < mc && b > mc && b < sc)) return out;

  auto grid_sup = [&](auto&& fn) {
    double s = 0.0;
    for (int i = 0; i <= 480; ++i) {
      const double t = 1e-6 * std::pow(10.0, 12.0 * i / 480.0);
      s = std::max(s, fn(t));
    }
    return s;
  };

  // C with H1 <= C (t^2 + |t|^a)
  double C = user_C.value_or(0.0);
  if (!user_C) {
    if (model.multipower_spec()) {
      for (const auto& t : model.multipower_spec()->subcritical)
        C += t.coef * (t.q.value - 2.0) / t.q.value;
    } else {
      C = grid_sup([&](double t) {
        return model.H1(t) / (t * t + std::pow(t, a));
      });
    }
  }
  if (!(C > 0.0)) return out;
  out.C = C;

  const double D = C * 0.5 * N * (b - 2.0) / (b - mc);
  const double pA = 0.5 * N * (a - 2.0);  // in (0, 2)

  // C_eps with H2 <= eps |t|^{2*} + C_eps |t|^b at the proof's eps choice.
  const double eps = std::pow(geom.S, 0.5 * sc) / N * (mc - a) / (sc - a);
  const double C_eps = grid_sup([&](double t) {
    return (model.H2(t) - eps * std::pow(t, sc)) / std::pow(t, b);
  });
  if (!(C_eps > 0.0)) return out;

  const double Cb = gn_constant(N, b).C;
  const double pB = 0.5 * N * (b - 2.0);

  auto ok = [&](double rho) {
    const double A = D * rho * rho;
    const double Ca = gn_constant(N, a).C;
    const double B = D * std::pow(Ca, a) * std::pow(rho, a - pA);
    const bool admissible =
        B * std::pow(std::sqrt(A) + 0.5, pA) <= std::sqrt(A) + 0.25;
    const bool below_one = std::sqrt(A) + 0.5 < 1.0;
    const bool chain2 = 0.5 * N * (sc - a) / (mc - a) * C_eps *
                            std::pow(Cb, b) * std::pow(rho, b - pB) <=
                        0.5;
    return admissible && below_one && chain2;
  };

  if (!ok(1e-12)) return out;
  double lo = 1e-12, hi = 1e-12;
  while (ok(hi) && hi < 1e6) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  out.rho_bound = lo;
  out.A = D * lo * lo;
  out.B = D * std::pow(gn_constant(N, a).C, a) * std::pow(lo, a - pA);
  return out;
}

}  // namespace normsol
