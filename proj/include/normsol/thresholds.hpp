#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "normsol/nonlinearity.hpp"

namespace normsol {

/// g(alpha, t) = 1/2 - C0 alpha^2 t^{-2} - C0 S^{-2^*/2} t^{2^*-2}.
double g_value(double C0, double S, int N, double alpha, double t);

/// Bound on rho^2 below which g(rho, .) has two positive roots:
/// (2/(N-2)) (S / (2^* C0))^{N/2}.
double rho_threshold(double C0, double S, int N);

/// Argmax of t -> g(alpha, t) t^2 (independent of alpha).
double g_argmax(double C0, double S, int N);

/// Roots R0 < R1 of g(rho, .), bisected to 1e-12 relative; nullopt when
/// max_t g(rho, t) <= 0 (the no-threshold regime).
std::optional<std::pair<double, double>> find_R0_R1(double C0, double S, int N,
                                                    double rho);

/// Best constant of S |u|_{2^*}^2 <= |grad u|_2^2, computed from the extremal
/// profile (1 + |x/mu|^2)^{-(N-2)/2} by radial quadrature; the ratio is
/// mu-independent and the agreement across mu is the accuracy self-check.
double sobolev_constant(int N);

/// N(q-2)/(2q).
double gn_gamma(int N, double q);

struct GnOptions {
  double r_max = 30.0;
  double r_step = 5e-4;
  double theta_tol = 1e-13;
};

struct GnResult {
  double C = 1.0;      // optimal constant C_{N,q}
  double gamma = 0.0;  // N(q-2)/(2q)
  double w0 = 0.0;     // shooting amplitude of the optimizer
  double norm_q = 0.0, norm_2 = 0.0, norm_grad = 0.0;
};

/// Optimal constant of |u|_q <= C |grad u|_2^gamma |u|_2^{1-gamma} for
/// 2 <= q < 2^*, via the ground state of -Lap w + w = |w|^{q-2} w.
GnResult gn_constant(int N, double q, const GnOptions& opts = {});

struct GeometryOptions {
  C0Options c0;
  std::vector<double> gn_exponents;  // extra q's to tabulate
  bool use_cache = true;
};

struct GeometryReport {
  int N = 3;
  double rho = 0.0;
  double C0 = 0.0;
  double C0_maximizer = 0.0;
  bool C0_unbounded = false;
  double S = 0.0;
  double rho_sq_threshold = 0.0;
  bool has_threshold = false;  // rho^2 < rho_sq_threshold
  double R0 = 0.0, R1 = 0.0, s_max = 0.0;
  std::vector<std::pair<double, double>> gamma_table;  // (q, gamma_q)
  std::vector<std::pair<double, double>> gn_table;     // (q, C_{N,q})
};

/// All geometric constants for (model, rho); results are cached keyed by
/// (model digest, N, rho).
GeometryReport compute_geometry(const NonlinearityModel& model, double rho,
                                const GeometryOptions& opts = {});

}  // namespace normsol
