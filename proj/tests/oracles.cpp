#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracles {

double radial_integral(const std::function<double(double)>& g, int N,
                       double r_lo, double r_hi, int intervals) {
  const double surf =
      2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
  const double a = std::log(r_lo), b = std::log(r_hi);
  const double h = (b - a) / intervals;
  auto f = [&](double x) { return g(std::exp(x)) * std::exp(N * x); };
  double acc = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return surf * acc * h / 3.0;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::runtime_error("oracle bisect: no sign change in bracket");
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ShootingProfile::lp(double p, int N) const {
  const double surf =
      2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
  double acc = 0.0;
  const std::size_t m = w.size() % 2 ? w.size() : w.size() - 1;
  for (std::size_t i = 0; i < m; ++i) {
    const double simp = (i == 0 || i == m - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += simp * std::pow(std::fabs(w[i]), p) * std::pow(i * h, N - 1.0);
  }
  return surf * acc * h / 3.0;
}

double ShootingProfile::value_at(double r) const {
  if (r < 0) r = -r;
  const double x = r / h;
  const std::size_t i = static_cast<std::size_t>(x);
  if (i + 1 >= w.size()) return 0.0;
  const double s = x - i;
  return (1.0 - s) * w[i] + s * w[i + 1];
}

namespace {

struct Outcome {
  int kind;  // 0 decayed, 1 crossed zero, 2 bounced
  ShootingProfile prof;
};

Outcome integrate(int N, double q, double lambda, double theta, double r_max,
                  double h) {
  auto acc = [&](double r, double w, double v) {
    const double nl = lambda * w - std::pow(std::fabs(w), q - 2.0) * w;
    if (r < 1e-14) return nl / N;
    return nl - (N - 1.0) / r * v;
  };
  Outcome out;
  out.kind = 0;
  out.prof.h = h;
  out.prof.theta = theta;
  double w = theta, v = 0.0;
  out.prof.w.push_back(w);
  out.prof.dw.push_back(v);
  const std::size_t steps = static_cast<std::size_t>(r_max / h);
  for (std::size_t i = 0; i < steps; ++i) {
    const double r = i * h;
    const double k1w = v, k1v = acc(r, w, v);
    const double k2w = v + 0.5 * h * k1v,
                 k2v = acc(r + 0.5 * h, w + 0.5 * h * k1w, v + 0.5 * h * k1v);
    const double k3w = v + 0.5 * h * k2v,
                 k3v = acc(r + 0.5 * h, w + 0.5 * h * k2w, v + 0.5 * h * k2v);
    const double k4w = v + h * k3v, k4v = acc(r + h, w + h * k3w, v + h * k3v);
    w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    out.prof.w.push_back(w);
    out.prof.dw.push_back(v);
    if (w <= 0.0) {
      out.kind = 1;
      return out;
    }
    if (v > 0.0 && w < 0.9 * theta) {
      out.kind = 2;
      return out;
    }
  }
  return out;
}

}  // namespace

ShootingProfile shoot_ground_state(int N, double q, double lambda,
                                   double r_max, double h) {
  double lo = 0.0, hi = 0.0;
  for (double theta = std::pow(lambda, 1.0 / (q - 2.0)); theta < 1e7;
       theta *= 2.0) {
    const Outcome o = integrate(N, q, lambda, theta, r_max, h);
    if (o.kind == 1) {
      hi = theta;
      break;
    }
    lo = theta;
  }
  if (hi == 0.0) throw std::runtime_error("oracle shooting: no upper bracket");
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    (integrate(N, q, lambda, mid, r_max, h).kind == 1 ? hi : lo) = mid;
  }
  Outcome o = integrate(N, q, lambda, 0.5 * (lo + hi), r_max, h);
  // truncate the noisy tail where the shot departs from the separatrix
  std::size_t m = o.prof.w.size();
  while (m > 2 && std::fabs(o.prof.w[m - 1]) < 1e-11 * o.prof.theta) --m;
  o.prof.w.resize(m);
  o.prof.dw.resize(m);
  ShootingProfile p = o.prof;
  p.norm2 = p.lp(2.0, N);
  const double surf =
      2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
  double acc = 0.0;
  const std::size_t mm = p.w.size() % 2 ? p.w.size() : p.w.size() - 1;
  for (std::size_t i = 0; i < mm; ++i) {
    const double simp = (i == 0 || i == mm - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += simp * p.dw[i] * p.dw[i] * std::pow(i * h, N - 1.0);
  }
  p.norm_grad = surf * acc * h / 3.0;
  return p;
}

}  // namespace oracles
