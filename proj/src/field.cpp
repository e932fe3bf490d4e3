#include "normsol/field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "normsol/kernels.hpp"
#include "normsol/log.hpp"

namespace normsol {

namespace {

double unit_sphere_area(int N) {
  // |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

}  // namespace

RadialGrid::RadialGrid(int dim, double r_max, int n)
    : N_(dim), r_max_(r_max), n_(n) {
  if (dim < 3) throw SpecError("grid dimension must be >= 3");
  if (n < 16) throw SpecError("grid needs at least 16 nodes");
  if (!(r_max > 0)) throw SpecError("grid radius must be positive");
  h_ = r_max / (n - 1);
  surf_ = unit_sphere_area(N_);
  ball_ = surf_ / N_ * std::pow(r_max_, N_);
  r_.resize(n_);
  w_.resize(n_);
  fw_.resize(n_ - 1);
  for (int i = 0; i < n_; ++i) r_[i] = i * h_;
  const double cv = surf_ / N_;  // cell volume = cv * (R^N - r^N)
  for (int i = 0; i < n_; ++i) {
    const double lo = i == 0 ? 0.0 : r_[i] - 0.5 * h_;
    const double hi = i == n_ - 1 ? r_max_ : r_[i] + 0.5 * h_;
    w_[i] = cv * (std::pow(hi, N_) - std::pow(lo, N_));
  }
  for (int i = 0; i + 1 < n_; ++i)
    fw_[i] = surf_ * std::pow(r_[i] + 0.5 * h_, N_ - 1) / h_;
  wall_fw_ = surf_ * std::pow(r_max_, N_ - 1) / h_;
}

GridPtr make_grid(int dim, double r_max, int n) {
  return std::make_shared<const RadialGrid>(dim, r_max, n);
}

RadialField RadialField::zeros(GridPtr grid) {
  RadialField u;
  u.grid_ = std::move(grid);
  u.re_.assign(u.grid_->size(), 0.0);
  return u;
}

RadialField RadialField::real(GridPtr grid, std::vector<double> values) {
  if (static_cast<int>(values.size()) != grid->size())
    throw SpecError("field size does not match grid");
  RadialField u;
  u.grid_ = std::move(grid);
  u.re_ = std::move(values);
  return u;
}

RadialField RadialField::complex(GridPtr grid, std::vector<double> re,
                                 std::vector<double> im) {
  if (static_cast<int>(re.size()) != grid->size() || re.size() != im.size())
    throw SpecError("field size does not match grid");
  RadialField u;
  u.grid_ = std::move(grid);
  u.re_ = std::move(re);
  u.im_ = std::move(im);
  return u;
}

RadialField RadialField::gaussian(GridPtr grid, double sigma, double amplitude) {
  std::vector<double> v(grid->size());
  const auto& r = grid->nodes();
  for (int i = 0; i < grid->size(); ++i)
    v[i] = amplitude * std::exp(-r[i] * r[i] / (2.0 * sigma * sigma));
  return real(std::move(grid), std::move(v));
}

double RadialField::abs_at(int i) const {
  return is_complex() ? std::hypot(re_[i], im_[i]) : std::fabs(re_[i]);
}

double RadialField::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) m = std::max(m, abs_at(i));
  return m;
}

RadialField RadialField::as_complex() const {
  if (is_complex()) return *this;
  RadialField u = *this;
  u.im_.assign(re_.size(), 0.0);
  return u;
}

double mass_squared(const RadialField& u) {
  const auto& w = u.grid()->weights();
  return kernels::weighted_abs2(w.data(), u.re().data(),
                                u.is_complex() ? u.im().data() : nullptr,
                                w.size());
}

double mass(const RadialField& u) { return std::sqrt(mass_squared(u)); }

double grad_norm_squared(const RadialField& u) {
  const auto& fw = u.grid()->face_weights();
  double e = kernels::diff_energy(fw.data(), u.re().data(), u.re().size());
  if (u.is_complex())
    e += kernels::diff_energy(fw.data(), u.im().data(), u.im().size());
  return e;
}

double grad_norm(const RadialField& u) { return std::sqrt(grad_norm_squared(u)); }

double lp_norm(const RadialField& u, double p) {
  if (p < 1.0) throw SpecError("lp_norm requires p >= 1");
  const auto& w = u.grid()->weights();
  if (p == 2.0) return mass(u);
  double acc = 0.0;
  for (int i = 0; i < u.size(); ++i) acc += w[i] * std::pow(u.abs_at(i), p);
  return std::pow(acc, 1.0 / p);
}

double integral_of(const std::function<double(double)>& fn,
                   const RadialField& u) {
  const auto& w = u.grid()->weights();
  const int n = u.size();
  std::vector<double> vals(n);
  if (u.is_complex()) {
    for (int i = 0; i < n; ++i) vals[i] = fn(u.abs_at(i));
  } else {
    const auto& re = u.re();
    for (int i = 0; i < n; ++i) vals[i] = fn(re[i]);
  }
  return kernels::dot(w.data(), vals.data(), n);
}

double h1_norm_squared(const RadialField& u) {
  return grad_norm_squared(u) + mass_squared(u);
}

double energy(const NonlinearityModel& model, const RadialField& u) {
  return 0.5 * grad_norm_squared(u) -
         integral_of([&](double t) { return model.F(t); }, u);
}

double interp_radial(const std::vector<double>& values, double h, double x) {
  const int n = static_cast<int>(values.size());
  const double r_max = (n - 1) * h;
  if (x > r_max) return 0.0;
  if (x < 0.0) x = -x;
  int j = static_cast<int>(std::floor(x / h));
  if (j > n - 2) j = n - 2;
  // 4-point Lagrange on nodes j-1 .. j+2 with even reflection at the origin
  const double s = x / h - j;
  auto at = [&](int k) {
    if (k < 0) k = -k;
    if (k > n - 1) return 0.0;
    return values[k];
  };
  const double ym1 = at(j - 1), y0 = at(j), y1 = at(j + 1), y2 = at(j + 2);
  const double c_m1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
  const double c_0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  const double c_1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
  const double c_2 = (s + 1.0) * s * (s - 1.0) / 6.0;
  return c_m1 * ym1 + c_0 * y0 + c_1 * y1 + c_2 * y2;
}

double support_radius(const RadialField& u) {
  const double cut = 1e-12 * u.max_abs();
  const auto& r = u.grid()->nodes();
  for (int i = u.size() - 1; i >= 0; --i)
    if (u.abs_at(i) > cut) return r[i];
  return 0.0;
}

namespace {

// Shared resampling core: out(r) = amp * u(c * r), clipping cubic overshoot
// of magnitude below clip_tol to zero on real nonnegative inputs.
RadialField resample(const RadialField& u, double c, double amp) {
  const auto& g = *u.grid();
  const int n = g.size();
  std::vector<double> re(n), im;
  for (int i = 0; i < n; ++i)
    re[i] = amp * interp_radial(u.re(), g.spacing(), c * g.nodes()[i]);
  if (u.is_complex()) {
    im.resize(n);
    for (int i = 0; i < n; ++i)
      im[i] = amp * interp_radial(u.im(), g.spacing(), c * g.nodes()[i]);
  } else {
    bool nonneg = true;
    for (int i = 0; i < n && nonneg; ++i) nonneg = u.re()[i] >= 0.0;
    if (nonneg) {
      const double clip = 1e-12 * u.max_abs() * std::fabs(amp);
      for (double& v : re)
        if (v < 0.0 && v > -clip) v = 0.0;
    }
  }
  return u.is_complex()
             ? RadialField::complex(u.grid(), std::move(re), std::move(im))
             : RadialField::real(u.grid(), std::move(re));
}

}  // namespace

RadialField scale_star(double s, const RadialField& u) {
  if (!(s > 0)) throw SpecError("scale_star requires s > 0");
  if (s == 1.0) return u;
  const auto& g = *u.grid();
  const double supp = support_radius(u);
  if (supp / s < 8.0 * g.spacing())
    throw AccuracyError("scale_star: rescaled support falls below grid resolution");
  if (s < 1.0 && supp / s > g.r_max()) {
    const double tail =
        std::fabs(interp_radial(u.re(), g.spacing(), s * g.r_max()));
    if (tail > 1e-8 * u.max_abs())
      throw AccuracyError("scale_star: rescaled support exceeds the grid");
  }
  return resample(u, s, std::pow(s, 0.5 * g.dim()));
}

RadialField dilate_mass(double theta, const RadialField& u) {
  if (theta < 1.0) throw SpecError("dilate_mass requires theta >= 1");
  if (theta == 1.0) return u;
  const auto& g = *u.grid();
  const double c = std::pow(theta, 2.0 / g.dim());
  if (support_radius(u) * c > g.r_max()) {
    const double tail =
        std::fabs(interp_radial(u.re(), g.spacing(), g.r_max() / c));
    if (tail > 1e-8 * u.max_abs())
      throw AccuracyError("dilate_mass: dilated support exceeds the grid");
  }
  return resample(u, 1.0 / c, 1.0);
}

RadialField rearrange_decreasing(const RadialField& u) {
  if (u.is_complex())
    throw SpecError("rearrange_decreasing expects a real-valued field");
  const auto& g = *u.grid();
  const int n = g.size();
  const auto& w = g.weights();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> av(n);
  for (int i = 0; i < n; ++i) av[i] = std::fabs(u.re()[i]);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return av[a] > av[b]; });

  // Conservative remap of |u|^2 over the cumulative-volume axis: the sorted
  // (value, cell volume) blocks form a decreasing step function; each output
  // node receives the mean of |u|^2 over its own cell. Weighted l2 content is
  // preserved exactly and a non-increasing input is a fixed point.
  std::vector<double> out(n, 0.0);
  std::size_t blk = 0;
  double blk_left = w[order[0]];
  for (int j = 0; j < n; ++j) {
    double need = w[j];
    double acc = 0.0;
    while (need > 0.0 && blk < order.size()) {
      const double v = av[order[blk]];
      const double take = std::min(need, blk_left);
      acc += take * v * v;
      need -= take;
      blk_left -= take;
      if (blk_left <= 0.0) {
        ++blk;
        if (blk < order.size()) blk_left = w[order[blk]];
      }
    }
    out[j] = std::sqrt(std::max(0.0, acc / w[j]));
  }
  return RadialField::real(u.grid(), std::move(out));
}

double virial_weight(const RadialField& u) {
  const auto& g = *u.grid();
  const double tail = u.abs_at(g.size() - 1);
  if (tail > 1e-6 * u.max_abs())
    log::warn("virial_weight: field not decayed at r_max (tail %.3e)", tail);
  const auto& w = g.weights();
  const auto& r = g.nodes();
  double acc = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double a2 = u.is_complex()
                          ? u.re()[i] * u.re()[i] + u.im()[i] * u.im()[i]
                          : u.re()[i] * u.re()[i];
    acc += w[i] * r[i] * r[i] * a2;
  }
  return acc;
}

namespace {

void laplacian_component(const RadialGrid& g, const std::vector<double>& v,
                         std::vector<double>& out) {
  const int n = g.size();
  const auto& fw = g.face_weights();
  const auto& w = g.weights();
  out.resize(n);
  for (int i = 0; i < n; ++i) {
    const double flux_r =
        i + 1 < n ? fw[i] * (v[i + 1] - v[i]) : -g.wall_face_weight() * v[i];
    const double flux_l = i > 0 ? fw[i - 1] * (v[i] - v[i - 1]) : 0.0;
    out[i] = (flux_r - flux_l) / w[i];
  }
}

}  // namespace

RadialField laplacian(const RadialField& u) {
  const auto& g = *u.grid();
  std::vector<double> re, im;
  laplacian_component(g, u.re(), re);
  if (u.is_complex()) {
    laplacian_component(g, u.im(), im);
    return RadialField::complex(u.grid(), std::move(re), std::move(im));
  }
  return RadialField::real(u.grid(), std::move(re));
}

RadialField operator*(double a, const RadialField& u) {
  RadialField v = u;
  kernels::scal(a, v.mutable_re().data(), v.size());
  if (v.is_complex()) kernels::scal(a, v.mutable_im().data(), v.size());
  return v;
}

RadialField add_scaled(const RadialField& u, double a, const RadialField& v) {
  if (u.grid() != v.grid()) throw SpecError("fields live on different grids");
  RadialField out = u.is_complex() || v.is_complex() ? u.as_complex() : u;
  const RadialField vv =
      out.is_complex() && !v.is_complex() ? v.as_complex() : v;
  kernels::axpy(a, vv.re().data(), out.mutable_re().data(), out.size());
  if (out.is_complex())
    kernels::axpy(a, vv.im().data(), out.mutable_im().data(), out.size());
  return out;
}

template <typename T>
void solve_tridiagonal(std::vector<T>& a, std::vector<T>& d, std::vector<T>& c,
                       std::vector<T>& rhs) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) {
    const T f = a[i] / d[i - 1];
    d[i] -= f * c[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  rhs[n - 1] /= d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / d[i];
}

template void solve_tridiagonal<double>(std::vector<double>&,
                                        std::vector<double>&,
                                        std::vector<double>&,
                                        std::vector<double>&);
template void solve_tridiagonal<std::complex<double>>(
    std::vector<std::complex<double>>&, std::vector<std::complex<double>>&,
    std::vector<std::complex<double>>&, std::vector<std::complex<double>>&);

void write_field_csv(const std::string& path, const RadialField& u) {
  std::ofstream f(path);
  if (!f) throw SpecError("cannot open " + path + " for writing");
  f.precision(17);
  f << "r,re,im\n";
  const auto& r = u.grid()->nodes();
  for (int i = 0; i < u.size(); ++i)
    f << r[i] << "," << u.re()[i] << ","
      << (u.is_complex() ? u.im()[i] : 0.0) << "\n";
  // grid metadata sidecar
  std::ofstream meta(path + ".meta.json");
  meta << "{\"N\": " << u.grid()->dim() << ", \"r_max\": " << u.grid()->r_max()
       << ", \"n\": " << u.grid()->size() << "}\n";
}

RadialField read_field_csv(const std::string& path, GridPtr grid_hint) {
  std::ifstream f(path);
  if (!f) throw SpecError("cannot open field file " + path);
  std::string line;
  if (!std::getline(f, line)) throw SpecError("empty field file " + path);
  std::vector<double> rs, res, ims;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double r, re, im = 0.0;
    if (!(is >> r >> re)) throw SpecError("malformed field row: " + line);
    is >> im;
    rs.push_back(r);
    res.push_back(re);
    ims.push_back(im);
  }
  if (rs.size() < 16) throw SpecError("field file too short: " + path);
  GridPtr grid = grid_hint;
  if (!grid) {
    int dim = 3;
    std::ifstream meta(path + ".meta.json");
    if (meta) {
      std::string text((std::istreambuf_iterator<char>(meta)),
                       std::istreambuf_iterator<char>());
      const auto pos = text.find("\"N\"");
      if (pos != std::string::npos) dim = std::atoi(text.c_str() + pos + 5);
    }
    grid = make_grid(dim, rs.back(), static_cast<int>(rs.size()));
  }
  if (static_cast<int>(rs.size()) != grid->size())
    throw SpecError("field file does not match the requested grid");
  const bool cplx =
      std::any_of(ims.begin(), ims.end(), [](double v) { return v != 0.0; });
  return cplx ? RadialField::complex(grid, std::move(res), std::move(ims))
              : RadialField::real(grid, std::move(res));
}

}  // namespace normsol
