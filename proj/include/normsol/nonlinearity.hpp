#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "normsol/errors.hpp"

namespace normsol {

/// Mass-critical exponent 2 + 4/N.
inline double mass_critical(int N) { return 2.0 + 4.0 / N; }
/// Sobolev-critical exponent 2N/(N-2), N >= 3.
inline double sobolev_critical(int N) { return 2.0 * N / (N - 2.0); }

/// A power-law exponent, kept as an exact fraction whenever one is known.
struct Exponent {
  double value = 0.0;
  bool exact = false;
  long long num = 0;
  long long den = 1;

  static Exponent rational(long long num, long long den);
  static Exponent real(double v) { return Exponent{v, false, 0, 1}; }
};

struct PowerTerm {
  double coef = 0.0;
  Exponent q;
};

/// f(t) = sum_k alpha_k |t|^{q_k-2} t + sum_l beta_l |t|^{p_l-2} t with
/// 2 < q_0 < ... < q_K < 2_# < p_0 < ... < p_L <= 2^*.
struct MultiPowerSpec {
  std::vector<PowerTerm> subcritical;    // exponents in (2, 2_#)
  std::vector<PowerTerm> supercritical;  // exponents in (2_#, 2^*]

  /// Throws SpecError on ordering violations, bad ranges, or nonpositive
  /// coefficients.
  void validate(int N) const;
};

/// Scalar nonlinearity together with the splitting H = H_1 + H_2 of
/// H(t) = f(t) t - 2 F(t) and the growth exponents used by the checks.
class NonlinearityModel {
 public:
  using Fn = std::function<double(double)>;

  double f(double t) const { return f_(t); }
  double F(double t) const { return F_(t); }
  double H1(double t) const { return H1_(t); }
  double H2(double t) const { return H2_(t); }
  double h1(double t) const { return h1_(t); }
  double h2(double t) const { return h2_(t); }
  double H(double t) const { return H1_(t) + H2_(t); }
  double h(double t) const { return h1_(t) + h2_(t); }
  /// G(t) = h(t) t - (2 + 2/N) H(t).
  double G(double t) const;

  double a() const { return a_; }
  double b() const { return b_; }
  int dim() const { return N_; }
  bool odd() const { return odd_; }
  /// True for tabulated models, whose derivative data is spline-based.
  bool approximate_derivatives() const { return approx_; }
  const std::optional<MultiPowerSpec>& multipower_spec() const { return spec_; }
  const std::string& digest() const { return digest_; }

  static NonlinearityModel custom(Fn f, Fn F, Fn H1, Fn H2, Fn h1, Fn h2,
                                  double a, double b, int N, bool odd,
                                  std::string digest);

  NonlinearityModel() = default;

 private:
  Fn f_, F_, H1_, H2_, h1_, h2_;
  double a_ = 0.0, b_ = 0.0;
  int N_ = 3;
  bool odd_ = false;
  bool approx_ = false;
  std::optional<MultiPowerSpec> spec_;
  std::string digest_;

  friend NonlinearityModel make_multipower(const MultiPowerSpec&, int);
  friend NonlinearityModel make_logpower_example();
  friend NonlinearityModel make_tabulated(std::vector<double>,
                                          std::vector<double>, int, bool);
};

/// Closed-form multi-power model; per-power H-term is (q-2)/q * alpha |t|^q.
NonlinearityModel make_multipower(const MultiPowerSpec& spec, int N);

/// F(t) = (3/7)|t|^{7/3} ln(e+|t|) + (3/13)|t|^{13/3}, N = 3.
NonlinearityModel make_logpower_example();

/// Model from tabulated (t, F) samples; f is the spline derivative and all
/// derivative-dependent checks are marked approximate.
NonlinearityModel make_tabulated(std::vector<double> t, std::vector<double> F,
                                 int N, bool odd);

struct C0Options {
  double t_lo = 1e-6;
  double t_hi = 1e6;
  int scan_points = 2401;  // per sign, log-spaced
  double t_tol = 1e-12;    // golden-section tolerance on t
};

struct C0Result {
  double value = 0.0;
  double maximizer = 0.0;
  bool unbounded_flag = false;  // sup still rising at the scan edge
};

/// sup_{t != 0} F(t) / (t^2 + |t|^{2^*}); throws SpecError when F <= 0 on the
/// whole scan range.
C0Result compute_C0(const NonlinearityModel& model, const C0Options& opts = {});

enum class CheckStatus { pass, consistent, fail };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double witness_t = 0.0;  // grid point exhibiting a violation, if any
  double witness_value = 0.0;
  std::string detail;
  bool approximate = false;
};

struct AssumptionReport {
  std::vector<CheckResult> checks;
  bool all_ok() const;
  const CheckResult* find(const std::string& name) const;
};

struct CheckGrid {
  double t_lo = 1e-6;
  double t_hi = 1e6;
  int points_per_decade = 40;
  double rel_tol = 1e-9;
  int edge_points = 8;  // samples used for limit-trend checks
};

/// Growth bounds, limits (as trends), sign conditions, the H-splitting
/// identity, and the (H2n) chains, each reported with a witness.
AssumptionReport check_assumptions(const NonlinearityModel& model,
                                   const CheckGrid& grid = {});

/// Evenness, small-t sign trend, large-t growth trend, and strict increase of
/// G(t)/t^{2_#} on the positive grid.
AssumptionReport check_G_conditions(const NonlinearityModel& model,
                                    const CheckGrid& grid = {});

}  // namespace normsol
