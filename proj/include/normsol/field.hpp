#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "normsol/errors.hpp"
#include "normsol/nonlinearity.hpp"

namespace normsol {

/// Uniform radial grid on [0, r_max] for H^1_rad(R^N), N >= 3. Node i sits at
/// r_i = i h; the quadrature weight of a node is the exact volume of its cell
/// [r_i - h/2, r_i + h/2] (clipped to the domain) under the surface measure
/// |S^{N-1}| r^{N-1} dr, so the weights sum to |B(0, r_max)| exactly and the
/// discrete Laplacian below is self-adjoint in the weighted inner product.
class RadialGrid {
 public:
  RadialGrid(int dim, double r_max, int n);

  int dim() const { return N_; }
  double r_max() const { return r_max_; }
  int size() const { return n_; }
  double spacing() const { return h_; }
  double surface_coeff() const { return surf_; }
  double ball_volume() const { return ball_; }

  const std::vector<double>& nodes() const { return r_; }
  const std::vector<double>& weights() const { return w_; }
  /// |S^{N-1}| r_{i+1/2}^{N-1} / h for the n-1 interior faces.
  const std::vector<double>& face_weights() const { return fw_; }
  /// Flux coefficient of the Dirichlet wall face at r_max.
  double wall_face_weight() const { return wall_fw_; }

 private:
  int N_;
  double r_max_;
  int n_;
  double h_;
  double surf_;
  double ball_;
  double wall_fw_;
  std::vector<double> r_, w_, fw_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int dim, double r_max = 40.0, int n = 4096);

/// Radial profile; real when im() is empty. Fields are values: operations
/// return new fields and never mutate their inputs.
class RadialField {
 public:
  RadialField() = default;
  static RadialField zeros(GridPtr grid);
  static RadialField real(GridPtr grid, std::vector<double> values);
  static RadialField complex(GridPtr grid, std::vector<double> re,
                             std::vector<double> im);
  /// amplitude * exp(-r^2 / (2 sigma^2))
  static RadialField gaussian(GridPtr grid, double sigma, double amplitude);

  const GridPtr& grid() const { return grid_; }
  bool is_complex() const { return !im_.empty(); }
  int size() const { return static_cast<int>(re_.size()); }
  const std::vector<double>& re() const { return re_; }
  const std::vector<double>& im() const { return im_; }
  std::vector<double>& mutable_re() { return re_; }
  std::vector<double>& mutable_im() { return im_; }
  double abs_at(int i) const;
  double max_abs() const;

  RadialField as_complex() const;  // zero imaginary part if real

 private:
  GridPtr grid_;
  std::vector<double> re_, im_;
};

// --- norms and integrals -------------------------------------------------

double mass_squared(const RadialField& u);
double mass(const RadialField& u);
double grad_norm_squared(const RadialField& u);
double grad_norm(const RadialField& u);
/// L^p norm, p >= 1 (throws SpecError otherwise).
double lp_norm(const RadialField& u, double p);
/// Integral of fn over R^N composed with the field: fn(u_i) for real fields,
/// fn(|u_i|) for complex ones (the modulus extension of even integrands).
double integral_of(const std::function<double(double)>& fn,
                   const RadialField& u);
/// H^1 norm squared: |grad u|_2^2 + |u|_2^2.
double h1_norm_squared(const RadialField& u);

/// J(u) = 1/2 |grad u|_2^2 - integral F(u).
double energy(const NonlinearityModel& model, const RadialField& u);

// --- transforms -----------------------------------------------------------

/// Mass-preserving scaling (s * u)(x) = s^{N/2} u(s x); gradient norm scales
/// by s. Throws AccuracyError when the rescaled support is unresolvable.
RadialField scale_star(double s, const RadialField& u);

/// v(x) = u(x / theta^{2/N}) for theta >= 1: mass scales by theta,
/// |grad v|^2 by theta^{2(N-2)/N}.
RadialField dilate_mass(double theta, const RadialField& u);

/// Radially decreasing rearrangement of |u| (real fields). Equimeasurable at
/// grid resolution: the weighted l2 content is preserved exactly and the
/// rearrangement of a non-increasing field is the field itself.
RadialField rearrange_decreasing(const RadialField& u);

/// integral |x|^2 |u|^2; warns when the field has not decayed at r_max.
double virial_weight(const RadialField& u);

/// Flux-form radial Laplacian u'' + (N-1)/r u' with regular origin and a
/// homogeneous Dirichlet ghost beyond r_max.
RadialField laplacian(const RadialField& u);

/// Largest radius with |u| above 1e-12 * max|u|.
double support_radius(const RadialField& u);

// --- small helpers --------------------------------------------------------

RadialField operator*(double a, const RadialField& u);
RadialField add_scaled(const RadialField& u, double a, const RadialField& v);

/// Cubic (4-point Lagrange) sample of a radial profile at radius x >= 0,
/// with even reflection at the origin and zero beyond r_max.
double interp_radial(const std::vector<double>& values, double h, double x);

/// Solves the tridiagonal system in place: diag d, lower a, upper c.
template <typename T>
void solve_tridiagonal(std::vector<T>& a, std::vector<T>& d, std::vector<T>& c,
                       std::vector<T>& rhs);

// --- serialization ---------------------------------------------------------

void write_field_csv(const std::string& path, const RadialField& u);
RadialField read_field_csv(const std::string& path, GridPtr grid_hint = nullptr);

}  // namespace normsol
