#include "normsol/thresholds.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <vector>

#include "normsol/errors.hpp"
#include "normsol/log.hpp"

namespace normsol {

double g_value(double C0, double S, int N, double alpha, double t) {
  if (!(t > 0)) throw SpecError("g is defined for t > 0");
  if (!(C0 > 0) || !(S > 0) || !(alpha > 0) || N < 3)
    throw SpecError("g requires positive C0, S, alpha and N >= 3");
  const double sc = sobolev_critical(N);
  return 0.5 - C0 * alpha * alpha / (t * t) -
         C0 * std::pow(S, -0.5 * sc) * std::pow(t, sc - 2.0);
}

double rho_threshold(double C0, double S, int N) {
  if (!(C0 > 0) || !(S > 0) || N < 3)
    throw SpecError("rho_threshold requires positive C0, S and N >= 3");
  const double sc = sobolev_critical(N);
  return 2.0 / (N - 2.0) * std::pow(S / (sc * C0), 0.5 * N);
}

double g_argmax(double C0, double S, int N) {
  const double sc = sobolev_critical(N);
  return std::pow(std::pow(S, 0.5 * sc) / (sc * C0), 1.0 / (sc - 2.0));
}

std::optional<std::pair<double, double>> find_R0_R1(double C0, double S, int N,
                                                    double rho) {
  const double smax = g_argmax(C0, S, N);
  if (g_value(C0, S, N, rho, smax) <= 0.0) return std::nullopt;

  auto bisect = [&](double lo, double hi) {
    // g(lo) and g(hi) have opposite signs by construction
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((g_value(C0, S, N, rho, mid) > 0.0) ==
          (g_value(C0, S, N, rho, hi) > 0.0))
        hi = mid;
      else
        lo = mid;
      if (hi - lo <= 1e-12 * hi) break;
    }
    return 0.5 * (lo + hi);
  };

  double lo = smax;
  while (g_value(C0, S, N, rho, lo) > 0.0) lo *= 0.5;
  double hi = smax;
  while (g_value(C0, S, N, rho, hi) > 0.0) hi *= 2.0;
  return std::make_pair(bisect(lo, smax), bisect(smax, hi));
}

namespace {

// integral_0^inf g(r) r^{N-1} dr via composite Simpson in x = log r.
double radial_integral_log(const std::function<double(double)>& g, int N,
                           double r_lo, double r_hi, int intervals) {
  const double a = std::log(r_lo), b = std::log(r_hi);
  const double h = (b - a) / intervals;
  auto f = [&](double x) { return g(std::exp(x)) * std::exp(N * x); };
  double acc = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

double unit_sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double sobolev_ratio(int N, double mu, int intervals) {
  const double sc = sobolev_critical(N);
  auto U = [&](double r) {
    const double x = r / mu;
    return std::pow(1.0 + x * x, -0.5 * (N - 2.0));
  };
  auto dU = [&](double r) {
    const double x = r / mu;
    return -(N - 2.0) * (r / (mu * mu)) * std::pow(1.0 + x * x, -0.5 * N);
  };
  const double surf = unit_sphere_area(N);
  const double grad2 =
      surf * radial_integral_log([&](double r) { const double d = dU(r); return d * d; },
                                 N, 1e-7 * mu, 1e12 * mu, intervals);
  const double star = surf * radial_integral_log(
                                 [&](double r) { return std::pow(U(r), sc); },
                                 N, 1e-7 * mu, 1e12 * mu, intervals);
  return grad2 / std::pow(star, 2.0 / sc);
}

}  // namespace

double sobolev_constant(int N) {
  static std::map<int, double> cache;
  static std::shared_mutex mtx;
  {
    std::shared_lock lk(mtx);
    if (auto it = cache.find(N); it != cache.end()) return it->second;
  }
  const int intervals = 48000;
  const double s1 = sobolev_ratio(N, 1.0, intervals);
  const double s2 = sobolev_ratio(N, 2.0, intervals);
  if (std::fabs(s1 - s2) > 1e-8 * s1)
    throw AccuracyError("sobolev_constant: mu self-check disagrees beyond 1e-8");
  std::unique_lock lk(mtx);
  cache[N] = s1;
  return s1;
}

double gn_gamma(int N, double q) { return N * (q - 2.0) / (2.0 * q); }

namespace {

enum class ShotOutcome { crossed_zero, bounced, decayed };

struct Shot {
  ShotOutcome outcome;
  std::vector<double> w, v;  // samples on the uniform r grid
  std::size_t valid;         // samples before the terminating event
};

Shot shoot(int N, double q, double theta, double r_max, double h) {
  const auto rhs_v = [&](double r, double w, double v) {
    const double nl = w - std::pow(std::fabs(w), q - 2.0) * w;
    if (r < 1e-14) return nl / N;
    return nl - (N - 1.0) / r * v;
  };
  const std::size_t steps = static_cast<std::size_t>(r_max / h);
  Shot s;
  s.w.reserve(steps + 1);
  s.v.reserve(steps + 1);
  double w = theta, v = 0.0;
  s.w.push_back(w);
  s.v.push_back(v);
  s.outcome = ShotOutcome::decayed;
  s.valid = 1;
  for (std::size_t i = 0; i < steps; ++i) {
    const double r = i * h;
    const double k1w = v, k1v = rhs_v(r, w, v);
    const double k2w = v + 0.5 * h * k1v,
                 k2v = rhs_v(r + 0.5 * h, w + 0.5 * h * k1w, v + 0.5 * h * k1v);
    const double k3w = v + 0.5 * h * k2v,
                 k3v = rhs_v(r + 0.5 * h, w + 0.5 * h * k2w, v + 0.5 * h * k2v);
    const double k4w = v + h * k3v,
                 k4v = rhs_v(r + h, w + h * k3w, v + h * k3v);
    w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    s.w.push_back(w);
    s.v.push_back(v);
    if (w <= 0.0) {
      s.outcome = ShotOutcome::crossed_zero;
      return s;
    }
    if (v > 0.0 && w < 0.9 * theta) {
      s.outcome = ShotOutcome::bounced;
      return s;
    }
    s.valid = s.w.size();
  }
  return s;
}

}  // namespace

GnResult gn_constant(int N, double q, const GnOptions& opts) {
  if (N < 3) throw SpecError("gn_constant requires N >= 3");
  if (q < 2.0 || q >= sobolev_critical(N))
    throw SpecError("gn_constant requires 2 <= q < 2N/(N-2)");
  GnResult out;
  out.gamma = gn_gamma(N, q);
  if (q == 2.0) {
    out.C = 1.0;
    return out;
  }

  static std::map<std::tuple<int, double, double>, GnResult> cache;
  static std::shared_mutex mtx;
  const auto key = std::make_tuple(N, q, opts.r_step);
  {
    std::shared_lock lk(mtx);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  std::ostringstream trace;
  double lo = 0.0, hi = 0.0;
  for (double theta = 1.0; theta < 1e6; theta *= 2.0) {
    const Shot s = shoot(N, q, theta, opts.r_max, opts.r_step);
    trace << theta << (s.outcome == ShotOutcome::crossed_zero ? ">" : "<")
          << " ";
    if (s.outcome == ShotOutcome::crossed_zero) {
      hi = theta;
      break;
    }
    lo = theta;
  }
  if (hi == 0.0)
    throw SolverError("gn_constant: shooting bracket failure, trace: " +
                      trace.str());
  while (hi - lo > opts.theta_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    const Shot s = shoot(N, q, mid, opts.r_max, opts.r_step);
    (s.outcome == ShotOutcome::crossed_zero ? hi : lo) = mid;
  }
  const double theta = 0.5 * (lo + hi);
  const Shot s = shoot(N, q, theta, opts.r_max, opts.r_step);

  // Truncate where the shot departs from the separatrix, then integrate
  // the stored profile with Simpson weights.
  std::size_t m = s.valid;
  while (m > 2 && std::fabs(s.w[m - 1]) < 1e-11 * theta) --m;
  if (m % 2 == 0) --m;  // Simpson needs an even interval count
  const double h = opts.r_step;
  const double surf = unit_sphere_area(N);
  double iq = 0.0, i2 = 0.0, ig = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = i * h;
    const double simp = (i == 0 || i == m - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double c = simp * std::pow(r, N - 1.0);
    iq += c * std::pow(std::fabs(s.w[i]), q);
    i2 += c * s.w[i] * s.w[i];
    ig += c * s.v[i] * s.v[i];
  }
  iq *= surf * h / 3.0;
  i2 *= surf * h / 3.0;
  ig *= surf * h / 3.0;

  out.w0 = theta;
  out.norm_q = std::pow(iq, 1.0 / q);
  out.norm_2 = std::sqrt(i2);
  out.norm_grad = std::sqrt(ig);
  out.C = out.norm_q /
          (std::pow(out.norm_grad, out.gamma) *
           std::pow(out.norm_2, 1.0 - out.gamma));

  std::unique_lock lk(mtx);
  cache[key] = out;
  return out;
}

GeometryReport compute_geometry(const NonlinearityModel& model, double rho,
                                const GeometryOptions& opts) {
  static std::map<std::string, GeometryReport> cache;
  static std::shared_mutex mtx;

  std::ostringstream key;
  key << model.digest() << "|rho=" << rho << "|gn=";
  for (double q : opts.gn_exponents) key << q << ",";
  if (opts.use_cache) {
    std::shared_lock lk(mtx);
    if (auto it = cache.find(key.str()); it != cache.end()) return it->second;
  }

  GeometryReport rep;
  rep.N = model.dim();
  rep.rho = rho;
  const C0Result c0 = compute_C0(model, opts.c0);
  rep.C0 = c0.value;
  rep.C0_maximizer = c0.maximizer;
  rep.C0_unbounded = c0.unbounded_flag;
  if (c0.unbounded_flag)
    log::warn("compute_geometry: C0 scan hit the range edge; value unreliable");
  rep.S = sobolev_constant(rep.N);
  rep.rho_sq_threshold = rho_threshold(rep.C0, rep.S, rep.N);
  rep.has_threshold = rho * rho < rep.rho_sq_threshold;
  if (rep.has_threshold) {
    const auto roots = find_R0_R1(rep.C0, rep.S, rep.N, rho);
    if (roots) {
      rep.R0 = roots->first;
      rep.R1 = roots->second;
      rep.s_max = g_argmax(rep.C0, rep.S, rep.N);
    } else {
      rep.has_threshold = false;
    }
  }
  for (double q : opts.gn_exponents) {
    rep.gamma_table.emplace_back(q, gn_gamma(rep.N, q));
    rep.gn_table.emplace_back(q, gn_constant(rep.N, q).C);
  }

  if (opts.use_cache) {
    std::unique_lock lk(mtx);
    cache[key.str()] = rep;
  }
  return rep;
}

}  // namespace normsol
