#include "normsol/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

namespace normsol {

namespace {

long long checked_gcd(long long a, long long b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

// Exact comparison n1/d1 <=> n2/d2 with positive denominators.
int cmp_frac(long long n1, long long d1, long long n2, long long d2) {
  const __int128 lhs = static_cast<__int128>(n1) * d2;
  const __int128 rhs = static_cast<__int128>(n2) * d1;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

int cmp_exponents(const Exponent& x, const Exponent& y) {
  if (x.exact && y.exact) return cmp_frac(x.num, x.den, y.num, y.den);
  if (x.value < y.value) return -1;
  if (x.value > y.value) return 1;
  return 0;
}

// exponent vs a rational bound num/den
int cmp_bound(const Exponent& q, long long num, long long den) {
  if (q.exact) return cmp_frac(q.num, q.den, num, den);
  const double b = static_cast<double>(num) / static_cast<double>(den);
  if (q.value < b) return -1;
  if (q.value > b) return 1;
  return 0;
}

double sgn(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

std::string fmt_exponent(const Exponent& q) {
  std::ostringstream os;
  if (q.exact)
    os << q.num << "/" << q.den;
  else
    os << q.value;
  return os.str();
}

}  // namespace

Exponent Exponent::rational(long long num, long long den) {
  if (den == 0) throw SpecError("exponent denominator is zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = checked_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  Exponent e;
  e.exact = true;
  e.num = num;
  e.den = den;
  e.value = static_cast<double>(num) / static_cast<double>(den);
  return e;
}

void MultiPowerSpec::validate(int N) const {
  if (N < 3) throw SpecError("dimension must be >= 3");
  if (subcritical.empty() && supercritical.empty())
    throw SpecError("multipower spec has no terms");
  // 2_# = (2N+4)/N, 2^* = 2N/(N-2)
  const long long mc_n = 2LL * N + 4, mc_d = N;
  const long long sc_n = 2LL * N, sc_d = N - 2;
  auto check_ordered = [](const std::vector<PowerTerm>& terms,
                          const char* what) {
    for (std::size_t i = 0; i + 1 < terms.size(); ++i)
      if (cmp_exponents(terms[i].q, terms[i + 1].q) >= 0)
        throw SpecError(std::string("multipower ") + what +
                        " exponents must be strictly increasing");
  };
  check_ordered(subcritical, "subcritical");
  check_ordered(supercritical, "supercritical");
  for (const auto& t : subcritical) {
    if (t.coef <= 0) throw SpecError("multipower coefficients must be positive");
    if (cmp_bound(t.q, 2, 1) <= 0)
      throw SpecError("subcritical exponent " + fmt_exponent(t.q) +
                      " must exceed 2");
    if (cmp_bound(t.q, mc_n, mc_d) >= 0)
      throw SpecError("subcritical exponent " + fmt_exponent(t.q) +
                      " must be below 2+4/N");
  }
  for (const auto& t : supercritical) {
    if (t.coef <= 0) throw SpecError("multipower coefficients must be positive");
    if (cmp_bound(t.q, mc_n, mc_d) <= 0)
      throw SpecError("supercritical exponent " + fmt_exponent(t.q) +
                      " must exceed 2+4/N");
    if (cmp_bound(t.q, sc_n, sc_d) > 0)
      throw SpecError("supercritical exponent " + fmt_exponent(t.q) +
                      " exceeds 2N/(N-2)");
  }
}

double NonlinearityModel::G(double t) const {
  return h(t) * t - (2.0 + 2.0 / N_) * H(t);
}

NonlinearityModel NonlinearityModel::custom(Fn f, Fn F, Fn H1, Fn H2, Fn h1,
                                            Fn h2, double a, double b, int N,
                                            bool odd, std::string digest) {
  NonlinearityModel m;
  m.f_ = std::move(f);
  m.F_ = std::move(F);
  m.H1_ = std::move(H1);
  m.H2_ = std::move(H2);
  m.h1_ = std::move(h1);
  m.h2_ = std::move(h2);
  m.a_ = a;
  m.b_ = b;
  m.N_ = N;
  m.odd_ = odd;
  m.digest_ = std::move(digest);
  return m;
}

NonlinearityModel make_multipower(const MultiPowerSpec& spec, int N) {
  spec.validate(N);
  const auto sub = spec.subcritical;
  const auto sup = spec.supercritical;

  auto f_eval = [sub, sup](double t) {
    if (t == 0.0) return 0.0;
    const double a = std::fabs(t);
    double v = 0.0;
    for (const auto& m : sub) v += m.coef * std::pow(a, m.q.value - 1.0);
    for (const auto& m : sup) v += m.coef * std::pow(a, m.q.value - 1.0);
    return sgn(t) * v;
  };
  auto F_eval = [sub, sup](double t) {
    const double a = std::fabs(t);
    if (a == 0.0) return 0.0;
    double v = 0.0;
    for (const auto& m : sub) v += m.coef / m.q.value * std::pow(a, m.q.value);
    for (const auto& m : sup) v += m.coef / m.q.value * std::pow(a, m.q.value);
    return v;
  };
  auto H_part = [](const std::vector<PowerTerm>& terms) {
    return [terms](double t) {
      const double a = std::fabs(t);
      if (a == 0.0) return 0.0;
      double v = 0.0;
      for (const auto& m : terms)
        v += m.coef * (m.q.value - 2.0) / m.q.value * std::pow(a, m.q.value);
      return v;
    };
  };
  auto h_part = [](const std::vector<PowerTerm>& terms) {
    return [terms](double t) {
      if (t == 0.0) return 0.0;
      const double a = std::fabs(t);
      double v = 0.0;
      for (const auto& m : terms)
        v += m.coef * (m.q.value - 2.0) * std::pow(a, m.q.value - 1.0);
      return sgn(t) * v;
    };
  };

  const double mc = mass_critical(N), sc = sobolev_critical(N);
  const double a_exp =
      sub.empty() ? 0.5 * (2.0 + mc) : sub.back().q.value;
  double b_exp = sup.empty() ? 0.5 * (mc + sc) : sup.front().q.value;
  if (b_exp >= sc) b_exp = 0.5 * (mc + sc);  // p0 = 2^*: any b in (2_#,2^*) works

  std::ostringstream dig;
  dig << "multipower;N=" << N << ";sub=";
  for (const auto& m : sub) dig << m.coef << ":" << fmt_exponent(m.q) << ",";
  dig << ";sup=";
  for (const auto& m : sup) dig << m.coef << ":" << fmt_exponent(m.q) << ",";

  NonlinearityModel model;
  model.f_ = f_eval;
  model.F_ = F_eval;
  model.H1_ = H_part(sub);
  model.H2_ = H_part(sup);
  model.h1_ = h_part(sub);
  model.h2_ = h_part(sup);
  model.a_ = a_exp;
  model.b_ = b_exp;
  model.N_ = N;
  model.odd_ = true;
  model.spec_ = spec;
  model.digest_ = dig.str();
  return model;
}

NonlinearityModel make_logpower_example() {
  const double e = std::exp(1.0);
  auto F = [e](double t) {
    const double a = std::fabs(t);
    if (a == 0.0) return 0.0;
    return 3.0 / 7.0 * std::pow(a, 7.0 / 3.0) * std::log(e + a) +
           3.0 / 13.0 * std::pow(a, 13.0 / 3.0);
  };
  auto f = [e](double t) {
    if (t == 0.0) return 0.0;
    const double a = std::fabs(t);
    const double L = std::log(e + a), E = e + a;
    const double v = std::pow(a, 4.0 / 3.0) * L +
                     3.0 / 7.0 * std::pow(a, 7.0 / 3.0) / E +
                     std::pow(a, 10.0 / 3.0);
    return sgn(t) * v;
  };
  auto H1 = [e](double t) {
    const double a = std::fabs(t);
    if (a == 0.0) return 0.0;
    const double L = std::log(e + a), E = e + a;
    return std::pow(a, 7.0 / 3.0) * L / 7.0 +
           3.0 / 7.0 * std::pow(a, 10.0 / 3.0) / E;
  };
  auto H2 = [](double t) {
    const double a = std::fabs(t);
    if (a == 0.0) return 0.0;
    return 7.0 / 13.0 * std::pow(a, 13.0 / 3.0);
  };
  auto h1 = [e](double t) {
    if (t == 0.0) return 0.0;
    const double a = std::fabs(t);
    const double L = std::log(e + a), E = e + a;
    const double v = std::pow(a, 4.0 / 3.0) * L / 3.0 +
                     11.0 / 7.0 * std::pow(a, 7.0 / 3.0) / E -
                     3.0 / 7.0 * std::pow(a, 10.0 / 3.0) / (E * E);
    return sgn(t) * v;
  };
  auto h2 = [](double t) {
    if (t == 0.0) return 0.0;
    return sgn(t) * 7.0 / 3.0 * std::pow(std::fabs(t), 10.0 / 3.0);
  };
  NonlinearityModel model;
  model.f_ = f;
  model.F_ = F;
  model.H1_ = H1;
  model.H2_ = H2;
  model.h1_ = h1;
  model.h2_ = h2;
  model.a_ = 3.0;
  model.b_ = 13.0 / 3.0;
  model.N_ = 3;
  model.odd_ = true;
  model.digest_ = "logpower;N=3";
  return model;
}

namespace {

// Natural cubic spline on strictly increasing abscissae.
struct Spline {
  std::vector<double> x, y, m;  // m: second derivatives at nodes

  static Spline fit(std::vector<double> xs, std::vector<double> ys) {
    const std::size_t n = xs.size();
    if (n < 3 || ys.size() != n)
      throw SpecError("tabulated model needs at least 3 (t, F) samples");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(xs[i] < xs[i + 1]))
        throw SpecError("tabulated abscissae must be strictly increasing");
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    b[0] = b[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = xs[i] - xs[i - 1], hr = xs[i + 1] - xs[i];
      a[i] = hl;
      b[i] = 2.0 * (hl + hr);
      c[i] = hr;
      d[i] = 6.0 * ((ys[i + 1] - ys[i]) / hr - (ys[i] - ys[i - 1]) / hl);
    }
    // Thomas
    for (std::size_t i = 1; i < n; ++i) {
      const double f = a[i] / b[i - 1];
      b[i] -= f * c[i - 1];
      d[i] -= f * d[i - 1];
    }
    std::vector<double> m(n);
    m[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
    return Spline{std::move(xs), std::move(ys), std::move(m)};
  }

  std::size_t seg(double t) const {
    if (t <= x.front()) return 0;
    if (t >= x.back()) return x.size() - 2;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    return static_cast<std::size_t>(it - x.begin()) - 1;
  }

  double eval(double t) const {
    const std::size_t i = seg(t);
    const double h = x[i + 1] - x[i];
    const double A = (x[i + 1] - t) / h, B = (t - x[i]) / h;
    return A * y[i] + B * y[i + 1] +
           ((A * A * A - A) * m[i] + (B * B * B - B) * m[i + 1]) * h * h / 6.0;
  }

  double deriv(double t) const {
    const std::size_t i = seg(t);
    const double h = x[i + 1] - x[i];
    const double A = (x[i + 1] - t) / h, B = (t - x[i]) / h;
    return (y[i + 1] - y[i]) / h +
           ((3.0 * B * B - 1.0) * m[i + 1] - (3.0 * A * A - 1.0) * m[i]) * h /
               6.0;
  }
};

}  // namespace

NonlinearityModel make_tabulated(std::vector<double> t, std::vector<double> F,
                                 int N, bool odd) {
  if (N < 3) throw SpecError("dimension must be >= 3");
  auto spline = std::make_shared<Spline>(Spline::fit(std::move(t), std::move(F)));
  const bool mirror = odd;  // odd f <=> even F: evaluate at |t|
  auto arg = [mirror](double v) { return mirror ? std::fabs(v) : v; };
  auto F_eval = [spline, arg](double v) { return spline->eval(arg(v)); };
  auto f_eval = [spline, arg, mirror](double v) {
    const double d = spline->deriv(arg(v));
    return mirror && v < 0 ? -d : d;
  };
  // H = f t - 2F, h = H' = f' t - f via a second finite difference of f.
  auto h_eval = [f_eval](double v) {
    const double step = 1e-6 * std::max(1.0, std::fabs(v));
    const double fp = (f_eval(v + step) - f_eval(v - step)) / (2.0 * step);
    return fp * v - f_eval(v);
  };
  auto H_eval = [f_eval, F_eval](double v) {
    return f_eval(v) * v - 2.0 * F_eval(v);
  };
  auto zero = [](double) { return 0.0; };

  NonlinearityModel model;
  model.f_ = f_eval;
  model.F_ = F_eval;
  model.H1_ = H_eval;
  model.H2_ = zero;
  model.h1_ = h_eval;
  model.h2_ = zero;
  model.a_ = 0.5 * (2.0 + mass_critical(N));
  model.b_ = 0.5 * (mass_critical(N) + sobolev_critical(N));
  model.N_ = N;
  model.odd_ = odd;
  model.approx_ = true;
  std::ostringstream dig;
  dig << "tabulated;N=" << N << ";n=" << spline->x.size() << ";odd=" << odd;
  model.digest_ = dig.str();
  return model;
}

namespace {

double c0_ratio(const NonlinearityModel& m, double t, double sc) {
  const double a = std::fabs(t);
  return m.F(t) / (t * t + std::pow(a, sc));
}

// Golden-section maximization of the C0 ratio in log|t|.
double golden_max(const NonlinearityModel& m, double sc, double lo, double hi,
                  double t_tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(lo), b = std::log(hi);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = c0_ratio(m, std::exp(c), sc), fd = c0_ratio(m, std::exp(d), sc);
  while (std::exp(b) - std::exp(a) > t_tol * std::max(1.0, std::exp(a))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = c0_ratio(m, std::exp(c), sc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = c0_ratio(m, std::exp(d), sc);
    }
    if (b - a < 1e-15) break;
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace

C0Result compute_C0(const NonlinearityModel& model, const C0Options& opts) {
  const double sc = sobolev_critical(model.dim());
  const int n = opts.scan_points;
  const double lr = std::log(opts.t_hi / opts.t_lo);

  double best_val = 0.0, best_t = 0.0;
  int best_idx = -1, best_sign = 1;
  const int nsigns = model.odd() ? 1 : 2;
  for (int s = 0; s < nsigns; ++s) {
    const double sign = s == 0 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
      const double t = sign * opts.t_lo * std::exp(lr * i / (n - 1));
      const double v = c0_ratio(model, t, sc);
      if (std::isfinite(v) && v > best_val) {
        best_val = v;
        best_t = t;
        best_idx = i;
        best_sign = s;
      }
    }
  }
  if (best_val <= 0.0)
    throw SpecError("F is nonpositive on the entire scan range; C0 undefined");

  C0Result out;
  if (best_idx == 0 || best_idx == n - 1) {
    // sup apparently attained at the range edge and still rising
    out.unbounded_flag = true;
    out.value = best_val;
    out.maximizer = best_t;
    return out;
  }
  const double step = std::exp(lr / (n - 1));
  const double lo = std::fabs(best_t) / step, hi = std::fabs(best_t) * step;
  double tm = golden_max(model, sc, lo, hi, opts.t_tol);
  if (best_sign == 1) tm = -tm;
  out.value = c0_ratio(model, tm, sc);
  out.maximizer = tm;
  return out;
}

namespace {

std::vector<double> geometric_grid(const CheckGrid& g) {
  std::vector<double> ts;
  const double decades = std::log10(g.t_hi / g.t_lo);
  const int n = static_cast<int>(decades * g.points_per_decade) + 1;
  ts.reserve(n);
  for (int i = 0; i < n; ++i)
    ts.push_back(g.t_lo * std::pow(10.0, decades * i / (n - 1)));
  return ts;
}

enum class Trend { decreasing, increasing, flat, mixed };

// Trend of v over the (ascending-t) samples, with relative slack.
Trend trend_of(const std::vector<double>& v, double slack) {
  bool inc = true, dec = true;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double tol = slack * (std::fabs(v[i]) + std::fabs(v[i + 1]) + 1e-300);
    if (v[i + 1] < v[i] - tol) inc = false;
    if (v[i + 1] > v[i] + tol) dec = false;
  }
  if (inc && dec) return Trend::flat;
  if (inc) return Trend::increasing;
  if (dec) return Trend::decreasing;
  return Trend::mixed;
}

CheckResult make_check(std::string name, CheckStatus st, double wt, double wv,
                       std::string detail, bool approx = false) {
  CheckResult r;
  r.name = std::move(name);
  r.status = st;
  r.witness_t = wt;
  r.witness_value = wv;
  r.detail = std::move(detail);
  r.approximate = approx;
  return r;
}

}  // namespace

bool AssumptionReport::all_ok() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return c.status == CheckStatus::fail;
  });
}

const CheckResult* AssumptionReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

AssumptionReport check_assumptions(const NonlinearityModel& model,
                                   const CheckGrid& grid) {
  AssumptionReport rep;
  const int N = model.dim();
  const double mc = mass_critical(N), sc = sobolev_critical(N);
  const auto ts = geometric_grid(grid);
  const int ne = std::min<int>(grid.edge_points, ts.size());
  const bool approx = model.approximate_derivatives();
  const double slack = 1e-6;

  const std::vector<double> signs = model.odd() ? std::vector<double>{1.0}
                                                : std::vector<double>{1.0, -1.0};

  // (F0) |f(t)| <= C (|t| + |t|^{2^*-1}) -- bounded ratio, trend at large |t|
  {
    double worst = 0.0, wt = 0.0;
    bool fail = false;
    for (double s : signs) {
      std::vector<double> edge;
      for (int i = 0; i < static_cast<int>(ts.size()); ++i) {
        const double t = s * ts[i];
        const double r = std::fabs(model.f(t)) /
                         (std::fabs(t) + std::pow(std::fabs(t), sc - 1.0));
        if (r > worst) {
          worst = r;
          wt = t;
        }
        if (i >= static_cast<int>(ts.size()) - ne) edge.push_back(r);
      }
      if (trend_of(edge, slack) == Trend::increasing) fail = true;
    }
    rep.checks.push_back(make_check(
        "F0.growth", fail ? CheckStatus::fail : CheckStatus::consistent, wt,
        worst, fail ? "|f|/(|t|+|t|^{2*-1}) still rising at the large-t edge"
                    : "bounded ratio on scan"));
  }

  // (F1) F(t)/t^2 -> 0 as t -> 0: ratio must shrink toward the origin.
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (double s : signs) {
      std::vector<double> edge;
      for (int i = 0; i < ne; ++i) {
        const double t = s * ts[i];
        edge.push_back(std::fabs(model.F(t)) / (t * t));
      }
      const Trend tr = trend_of(edge, slack);
      if (!(tr == Trend::increasing || tr == Trend::flat) ||
          edge.front() > edge.back() + slack) {
        fail = true;
        wt = s * ts[0];
        wv = edge.front();
      }
      if (edge.front() > 1e3) {  // plainly diverging
        fail = true;
        wt = s * ts[0];
        wv = edge.front();
      }
    }
    rep.checks.push_back(make_check(
        "F1.small_t", fail ? CheckStatus::fail : CheckStatus::consistent, wt,
        wv, "F/t^2 trend toward 0 at the origin edge"));
  }

  // (F2) F(t)/|t|^{2_#} -> +inf as t -> 0: ratio positive and rising toward 0.
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (double s : signs) {
      std::vector<double> edge;
      for (int i = 0; i < ne; ++i) {
        const double t = s * ts[i];
        edge.push_back(model.F(t) / std::pow(std::fabs(t), mc));
      }
      if (edge.front() <= 0.0 || trend_of(edge, slack) != Trend::decreasing) {
        fail = true;
        wt = s * ts[0];
        wv = edge.front();
      }
    }
    rep.checks.push_back(make_check(
        "F2.small_t", fail ? CheckStatus::fail : CheckStatus::consistent, wt,
        wv,
        fail ? "F/|t|^{2_#} does not diverge toward the origin"
             : "ratio rising toward the origin"));
  }

  // (F3) F(t)/|t|^{2^*} -> 0 as |t| -> inf.
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (double s : signs) {
      std::vector<double> edge;
      for (int i = static_cast<int>(ts.size()) - ne;
           i < static_cast<int>(ts.size()); ++i) {
        const double t = s * ts[i];
        edge.push_back(std::fabs(model.F(t)) / std::pow(std::fabs(t), sc));
      }
      const Trend tr = trend_of(edge, slack);
      if (!(tr == Trend::decreasing || tr == Trend::flat) ||
          edge.back() > edge.front() + slack) {
        fail = true;
        wt = s * ts.back();
        wv = edge.back();
      }
      if (tr == Trend::flat && edge.back() > 1e-12) {
        fail = true;  // tends to a positive constant, not 0
        wt = s * ts.back();
        wv = edge.back();
      }
    }
    rep.checks.push_back(make_check(
        "F3.large_t", fail ? CheckStatus::fail : CheckStatus::consistent, wt,
        wv, "F/|t|^{2*} trend at the large-t edge"));
  }

  // (F4) f(t) t <= 2^* F(t) pointwise.
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (double s : signs) {
      for (double ta : ts) {
        const double t = s * ta;
        const double lhs = model.f(t) * t, rhs = sc * model.F(t);
        const double tol =
            grid.rel_tol * (1.0 + std::pow(std::fabs(t), sc));
        if (lhs > rhs + tol) {
          fail = true;
          wt = t;
          wv = lhs - rhs;
          break;
        }
      }
    }
    rep.checks.push_back(make_check(
        "F4.pointwise", fail ? CheckStatus::fail : CheckStatus::pass, wt, wv,
        "f(t) t <= 2^* F(t) on the sample grid"));
  }

  // H identity: H1 + H2 = f t - 2F.
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (double s : signs) {
      for (double ta : ts) {
        const double t = s * ta;
        const double lhs = model.H(t);
        const double rhs = model.f(t) * t - 2.0 * model.F(t);
        const double tol =
            grid.rel_tol * (1.0 + std::pow(std::fabs(t), sc));
        if (std::fabs(lhs - rhs) > tol) {
          fail = true;
          wt = t;
          wv = lhs - rhs;
          break;
        }
      }
    }
    rep.checks.push_back(make_check("H.identity",
                                    fail ? CheckStatus::fail : CheckStatus::pass,
                                    wt, wv, "H1+H2 = f t - 2F on the grid"));
  }

  // h_j = H_j' by central differences.
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (double s : signs) {
      for (double ta : ts) {
        const double t = s * ta;
        const double step = 1e-6 * std::max(std::fabs(t), 1e-3);
        const double fd1 = (model.H1(t + step) - model.H1(t - step)) / (2 * step);
        const double fd2 = (model.H2(t + step) - model.H2(t - step)) / (2 * step);
        const double tol1 = 1e-4 * (1.0 + std::fabs(fd1)) ;
        const double tol2 = 1e-4 * (1.0 + std::fabs(fd2));
        if (std::fabs(model.h1(t) - fd1) > tol1 ||
            std::fabs(model.h2(t) - fd2) > tol2) {
          fail = true;
          wt = t;
          wv = model.h1(t) - fd1;
          break;
        }
      }
    }
    rep.checks.push_back(make_check(
        "H.derivative", fail ? CheckStatus::fail : CheckStatus::pass, wt, wv,
        "h_j matches finite differences of H_j", approx));
  }

  // F is the antiderivative of f (composite Simpson on a few sample points).
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (double target : {0.1, 1.0, 5.0, -2.0}) {
      if (model.odd() && target < 0) continue;
      const int ns = 4000;
      const double h = target / ns;
      double acc = model.f(0.0) + model.f(target);
      for (int i = 1; i < ns; ++i)
        acc += (i % 2 ? 4.0 : 2.0) * model.f(i * h);
      acc *= h / 3.0;
      const double err = std::fabs(acc - model.F(target));
      if (err > 1e-7 * (1.0 + std::fabs(model.F(target)))) {
        fail = true;
        wt = target;
        wv = err;
      }
    }
    rep.checks.push_back(make_check(
        "F.antiderivative", fail ? CheckStatus::fail : CheckStatus::pass, wt,
        wv, "F(t) = integral of f on sample points", approx));
  }

  // Odd symmetry holds exactly.
  if (model.odd()) {
    bool fail = false;
    double wt = 0.0;
    for (double ta : ts) {
      if (model.F(-ta) != model.F(ta) || model.f(-ta) != -model.f(ta)) {
        fail = true;
        wt = ta;
        break;
      }
    }
    rep.checks.push_back(make_check("odd.symmetry",
                                    fail ? CheckStatus::fail : CheckStatus::pass,
                                    wt, 0.0, "F even and f odd, exactly"));
  }

  // (H0n) growth of H1 and H2.
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (double s : signs) {
      std::vector<double> e1, e2;
      for (int i = static_cast<int>(ts.size()) - ne;
           i < static_cast<int>(ts.size()); ++i) {
        const double t = s * ts[i];
        const double at = std::fabs(t);
        e1.push_back(std::fabs(model.H1(t)) /
                     (at * at + std::pow(at, model.a())));
        e2.push_back(std::fabs(model.H2(t)) /
                     (std::pow(at, model.b()) + std::pow(at, sc)));
      }
      if (trend_of(e1, slack) == Trend::increasing ||
          trend_of(e2, slack) == Trend::increasing) {
        fail = true;
        wt = s * ts.back();
        wv = std::max(e1.back(), e2.back());
      }
    }
    rep.checks.push_back(make_check(
        "H0n.growth", fail ? CheckStatus::fail : CheckStatus::consistent, wt,
        wv, "H1 <= C(t^2+|t|^a), H2 <= C(|t|^b+|t|^{2*}) as trends"));
  }

  // (H2n) chains: 2 H1 <= h1 t <= a H1 and b H2 <= h2 t <= 2^* H2.
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (double s : signs) {
      for (double ta : ts) {
        const double t = s * ta;
        const double tol =
            grid.rel_tol * (1.0 + std::pow(std::fabs(t), sc));
        const double H1v = model.H1(t), H2v = model.H2(t);
        const double c1 = model.h1(t) * t, c2 = model.h2(t) * t;
        if (c1 < 2.0 * H1v - tol || c1 > model.a() * H1v + tol ||
            c2 < model.b() * H2v - tol || c2 > sc * H2v + tol) {
          fail = true;
          wt = t;
          wv = c1 - 2.0 * H1v;
          break;
        }
      }
    }
    rep.checks.push_back(make_check(
        "H2n.chains", fail ? CheckStatus::fail : CheckStatus::pass, wt, wv,
        "2H1 <= h1 t <= a H1 and b H2 <= h2 t <= 2^* H2 on the grid", approx));
  }

  // (F5a)/(F5b): derivative growth bounds for the well-posedness hypotheses.
  {
    bool fail_a = false, fail_b = false;
    double wta = 0.0, wtb = 0.0;
    for (double s : signs) {
      std::vector<double> ea, eb;
      for (int i = 0; i < static_cast<int>(ts.size()); ++i) {
        const double t = s * ts[i];
        const double step = 1e-6 * std::max(std::fabs(t), 1e-3);
        const double fp = (model.f(t + step) - model.f(t - step)) / (2 * step);
        const double ra =
            std::fabs(fp) / std::pow(1.0 + std::fabs(t), model.b() - 2.0);
        const double rb = std::fabs(fp) / (std::pow(std::fabs(t), model.a() - 2.0) +
                                           std::pow(std::fabs(t), sc - 2.0));
        if (i >= static_cast<int>(ts.size()) - ne) {
          ea.push_back(ra);
          eb.push_back(rb);
        }
      }
      if (trend_of(ea, slack) == Trend::increasing) {
        fail_a = true;
        wta = s * ts.back();
      }
      if (trend_of(eb, slack) == Trend::increasing) {
        fail_b = true;
        wtb = s * ts.back();
      }
    }
    rep.checks.push_back(make_check(
        "F5a.lipschitz", fail_a ? CheckStatus::fail : CheckStatus::consistent,
        wta, 0.0, "|f'| <= C(1+|t|)^{b-2} as a trend", true));
    rep.checks.push_back(make_check(
        "F5b.derivative_growth",
        fail_b ? CheckStatus::fail : CheckStatus::consistent, wtb, 0.0,
        "|f'| <= C(|t|^{a-2}+|t|^{2*-2}) as a trend", true));
  }

  return rep;
}

AssumptionReport check_G_conditions(const NonlinearityModel& model,
                                    const CheckGrid& grid) {
  AssumptionReport rep;
  const double mc = mass_critical(model.dim());
  const auto ts = geometric_grid(grid);
  const int ne = std::min<int>(grid.edge_points, ts.size());
  const double slack = 1e-7;

  // (G0) evenness.
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (double t : ts) {
      const double d = model.G(-t) - model.G(t);
      if (std::fabs(d) > 1e-12 * (1.0 + std::fabs(model.G(t)))) {
        fail = true;
        wt = t;
        wv = d;
        break;
      }
    }
    rep.checks.push_back(make_check(
        "G0.even", fail ? CheckStatus::fail : CheckStatus::pass, wt, wv,
        "G(-t) = G(t)"));
  }

  std::vector<double> ratio(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    ratio[i] = model.G(ts[i]) / std::pow(ts[i], mc);

  // (G1) limsup_{t->0} G/|t|^{2_#} <= 0.
  {
    std::vector<double> edge(ratio.begin(), ratio.begin() + ne);
    bool ok = edge.front() <= slack * (1.0 + std::fabs(edge.back()));
    if (!ok) {
      // positive values decaying toward the origin are consistent with 0
      ok = trend_of(edge, slack) == Trend::increasing;
    }
    rep.checks.push_back(make_check(
        "G1.small_t", ok ? CheckStatus::consistent : CheckStatus::fail,
        ts.front(), edge.front(),
        ok ? "G/|t|^{2_#} nonpositive or decaying toward 0"
           : "G/|t|^{2_#} positive and rising toward the origin"));
  }

  // (G2) G/|t|^{2_#} -> +inf as |t| -> inf.
  {
    std::vector<double> edge(ratio.end() - ne, ratio.end());
    const bool ok =
        trend_of(edge, slack) == Trend::increasing && edge.back() > 0.0;
    rep.checks.push_back(make_check(
        "G2.large_t", ok ? CheckStatus::consistent : CheckStatus::fail,
        ts.back(), edge.back(), "G/|t|^{2_#} rising at the large-t edge"));
  }

  // (G3) strict increase of G/t^{2_#} on the positive grid.
  {
    bool fail = false;
    double wt = 0.0, wv = 0.0;
    for (std::size_t i = 0; i + 1 < ratio.size(); ++i) {
      const double tol =
          slack * (std::fabs(ratio[i]) + std::fabs(ratio[i + 1]) + 1e-300);
      if (ratio[i + 1] <= ratio[i] - tol) {
        fail = true;
        wt = ts[i + 1];
        wv = ratio[i + 1] - ratio[i];
        break;
      }
    }
    rep.checks.push_back(make_check(
        "G3.increasing", fail ? CheckStatus::fail : CheckStatus::pass, wt, wv,
        "G(t)/t^{2_#} increasing on the positive grid"));
  }

  return rep;
}

}  // namespace normsol
