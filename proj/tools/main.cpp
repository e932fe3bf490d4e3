// normsol: normalized solitary waves of -Lap u + lambda u = f(u), their
// variational geometry, and the dynamics of the associated Schrodinger flow.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "normsol/dynamics.hpp"
#include "normsol/fibering.hpp"
#include "normsol/kernels.hpp"
#include "normsol/model_file.hpp"
#include "normsol/scalar_bounds.hpp"
#include "normsol/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace normsol;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kSolverFailure = 3,
  kBlowupDetected = 4,
  kAccuracyError = 5,
};

struct CommonOpts {
  std::string model_path;
  double rho = 1.0;
  int n = 4096;
  double rmax = 40.0;
  double dt = 1e-3;
  double t_end = 10.0;
  double s = 1.0;
  double eps = 0.0;
  unsigned seed = 12345;
  int jobs = 1;
  std::string out = ".";
};

json check_entry(const std::string& tag, bool pass, double value = 0.0,
                 const std::string& note = "") {
  json j;
  j["tag"] = tag;
  j["pass"] = pass;
  j["value"] = value;
  if (!note.empty()) j["note"] = note;
  return j;
}

json report_to_json(const AssumptionReport& rep, const std::string& prefix) {
  json arr = json::array();
  for (const auto& c : rep.checks) {
    json j;
    j["tag"] = prefix + "." + c.name;
    j["status"] = c.status == CheckStatus::pass
                      ? "pass"
                      : (c.status == CheckStatus::consistent ? "consistent"
                                                             : "fail");
    j["witness_t"] = c.witness_t;
    j["witness_value"] = c.witness_value;
    j["detail"] = c.detail;
    if (c.approximate) j["approximate"] = true;
    arr.push_back(j);
  }
  return arr;
}

json geometry_to_json(const GeometryReport& g) {
  json j;
  j["N"] = g.N;
  j["rho"] = g.rho;
  j["C0"] = g.C0;
  j["C0_maximizer"] = g.C0_maximizer;
  j["C0_unbounded"] = g.C0_unbounded;
  j["S"] = g.S;
  j["rho_sq_threshold"] = g.rho_sq_threshold;
  j["has_threshold"] = g.has_threshold;
  if (g.has_threshold) {
    j["R0"] = g.R0;
    j["R1"] = g.R1;
    j["s_max"] = g.s_max;
  }
  for (const auto& [q, ga] : g.gamma_table) j["gamma"][std::to_string(q)] = ga;
  for (const auto& [q, c] : g.gn_table) j["C_Nq"][std::to_string(q)] = c;
  return j;
}

json result_to_json(const GroundStateResult& r) {
  json j;
  j["branch"] = r.branch == Branch::local_min ? "local-min" : "M-minus";
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["lambda"] = r.lambda;
  j["energy"] = r.energy;
  j["mass"] = r.mass;
  j["grad_norm"] = r.grad_norm;
  j["residual_pde"] = r.residuals.pde;
  j["residual_nehari"] = r.residuals.nehari;
  j["residual_pohozaev"] = r.residuals.pohozaev;
  j["geometry"] = geometry_to_json(r.geometry);
  if (r.branch == Branch::m_minus)
    j["classification"] = to_string(r.classification);
  return j;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw SpecError("cannot write " + path.string());
  f << j.dump(2) << "\n";
}

void write_manifest(const CommonOpts& o, const std::string& command,
                    double wall_s) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["simd"] = kernels::isa_name(kernels::active_isa());
  j["wall_time_s"] = wall_s;
  json cfg;
  cfg["model"] = o.model_path;
  cfg["rho"] = o.rho;
  cfg["n"] = o.n;
  cfg["rmax"] = o.rmax;
  cfg["dt"] = o.dt;
  cfg["T"] = o.t_end;
  cfg["s"] = o.s;
  cfg["eps"] = o.eps;
  cfg["seed"] = o.seed;
  cfg["jobs"] = o.jobs;
  j["config"] = cfg;
  write_json(fs::path(o.out) / "manifest.json", j);
}

int cmd_check(const CommonOpts& o) {
  const NonlinearityModel model = load_model(o.model_path);
  json j;
  j["model_digest"] = model.digest();
  const C0Result c0 = compute_C0(model);
  j["C0"] = c0.value;
  j["C0_maximizer"] = c0.maximizer;
  j["C0_unbounded"] = c0.unbounded_flag;
  const AssumptionReport fa = check_assumptions(model);
  const AssumptionReport ga = check_G_conditions(model);
  j["checks"] = report_to_json(fa, "model");
  for (auto& e : report_to_json(ga, "model")) j["checks"].push_back(e);
  j["all_ok"] = fa.all_ok() && ga.all_ok();
  write_json(fs::path(o.out) / "check_report.json", j);
  std::cout << (j["all_ok"].get<bool>() ? "all checks consistent"
                                        : "violations found")
            << "; report written\n";
  return kOk;
}

int cmd_thresholds(const CommonOpts& o, bool csv) {
  const NonlinearityModel model = load_model(o.model_path);
  GeometryOptions gopt;
  const GeometryReport rep = compute_geometry(model, o.rho, gopt);
  json j = geometry_to_json(rep);
  json checks = json::array();
  checks.push_back(check_entry("threshold.has_well_geometry", rep.has_threshold,
                               rep.rho_sq_threshold));
  if (rep.has_threshold) {
    checks.push_back(check_entry(
        "threshold.g_root_R0",
        std::fabs(g_value(rep.C0, rep.S, rep.N, o.rho, rep.R0)) <= 1e-10,
        rep.R0));
    checks.push_back(check_entry(
        "threshold.g_root_R1",
        std::fabs(g_value(rep.C0, rep.S, rep.N, o.rho, rep.R1)) <= 1e-10,
        rep.R1));
    checks.push_back(check_entry("threshold.ordering",
                                 rep.R0 < rep.s_max && rep.s_max < rep.R1,
                                 rep.s_max));
  }
  j["checks"] = checks;
  write_json(fs::path(o.out) / "geometry_report.json", j);

  if (csv && rep.has_threshold) {
    std::ofstream f(fs::path(o.out) / "g_curve.csv");
    f.precision(17);
    f << "t,g\n";
    const double lo = rep.R0 / 10.0, hi = rep.R1 * 10.0;
    for (int i = 0; i < 400; ++i) {
      const double t = lo * std::pow(hi / lo, i / 399.0);
      f << t << "," << g_value(rep.C0, rep.S, rep.N, o.rho, t) << "\n";
    }
  }
  std::cout << "C0=" << rep.C0 << " S=" << rep.S
            << " rho_sq_threshold=" << rep.rho_sq_threshold;
  if (rep.has_threshold)
    std::cout << " R0=" << rep.R0 << " R1=" << rep.R1;
  std::cout << "\n";
  return kOk;
}

int cmd_ground(const CommonOpts& o) {
  const NonlinearityModel model = load_model(o.model_path);
  GridPtr grid = make_grid(model.dim(), o.rmax, o.n);
  const GroundStateResult r = minimize_local(model, o.rho, grid);
  json j = result_to_json(r);
  double umin = r.field.re()[0];
  for (double v : r.field.re()) umin = std::min(umin, v);
  json checks = json::array();
  checks.push_back(check_entry("local_min.converged", r.converged,
                               r.iterations));
  checks.push_back(check_entry("local_min.energy_negative", r.energy < 0.0,
                               r.energy));
  checks.push_back(check_entry("local_min.mass_matches_rho",
                               std::fabs(r.mass - o.rho) <= 1e-8 * o.rho,
                               r.mass));
  checks.push_back(check_entry("local_min.grad_below_R0",
                               r.grad_norm < r.geometry.R0, r.grad_norm));
  checks.push_back(check_entry("local_min.lambda_positive", r.lambda > 0.0,
                               r.lambda));
  checks.push_back(check_entry("local_min.sign_constant", umin > 0.0, umin));
  checks.push_back(check_entry("local_min.residual_pde",
                               r.residuals.pde <= 1e-5, r.residuals.pde));
  j["checks"] = checks;
  write_json(fs::path(o.out) / "ground_report.json", j);
  write_field_csv((fs::path(o.out) / "ground_field.csv").string(), r.field);
  std::cout << "J=" << r.energy << " lambda=" << r.lambda
            << " |grad|=" << r.grad_norm << " iters=" << r.iterations << "\n";
  return r.converged ? kOk : kSolverFailure;
}

int cmd_excited(const CommonOpts& o) {
  const NonlinearityModel model = load_model(o.model_path);
  GridPtr grid = make_grid(model.dim(), o.rmax, o.n);
  const GroundStateResult r = minimize_on_Mminus(model, o.rho, grid);
  json j = result_to_json(r);
  bool decreasing = true;
  for (int i = 0; i + 1 < r.field.size() && decreasing; ++i)
    decreasing = r.field.re()[i + 1] <= r.field.re()[i] + 1e-12;
  json checks = json::array();
  checks.push_back(check_entry("second_solution.converged", r.converged,
                               r.iterations));
  checks.push_back(check_entry("second_solution.energy_positive",
                               r.energy > 0.0, r.energy));
  checks.push_back(check_entry(
      "second_solution.on_manifold",
      std::fabs(M_functional(model, r.field)) <=
          1e-8 * grad_norm_squared(r.field),
      M_functional(model, r.field)));
  checks.push_back(check_entry("second_solution.class_minus",
                               r.classification == MClass::minus));
  checks.push_back(check_entry("second_solution.lambda_positive",
                               r.lambda > 0.0, r.lambda));
  checks.push_back(check_entry("second_solution.radial_nonincreasing",
                               decreasing));
  checks.push_back(check_entry("second_solution.residual_pde",
                               r.residuals.pde <= 1e-4, r.residuals.pde));
  j["checks"] = checks;
  write_json(fs::path(o.out) / "excited_report.json", j);
  write_field_csv((fs::path(o.out) / "excited_field.csv").string(), r.field);
  std::cout << "J=" << r.energy << " lambda=" << r.lambda
            << " class=" << to_string(r.classification)
            << " iters=" << r.iterations << "\n";
  return r.converged ? kOk : kSolverFailure;
}

int cmd_fiber(const CommonOpts& o, const std::string& field_path,
              double sigma) {
  const NonlinearityModel model = load_model(o.model_path);
  GridPtr grid = make_grid(model.dim(), o.rmax, o.n);
  RadialField u =
      field_path.empty()
          ? (o.rho / mass(RadialField::gaussian(grid, sigma, 1.0))) *
                RadialField::gaussian(grid, sigma, 1.0)
          : read_field_csv(field_path, grid);

  const FiberScan scan = fiber_scan(model, u);
  {
    std::ofstream f(fs::path(o.out) / "fiber_scan.csv");
    f.precision(17);
    f << "s,phi,dphi,d2phi\n";
    for (const auto& p : scan.points)
      f << p.s << "," << p.phi << "," << p.dphi << "," << p.d2phi << "\n";
  }
  json j;
  j["j1"] = scan.j1;
  j["j2"] = scan.j2;
  j["local_max"] = scan.local_max;
  j["local_min"] = scan.local_min;
  if (scan.t_u) j["t_u"] = *scan.t_u;
  if (scan.class_at_1) j["class_at_1"] = to_string(*scan.class_at_1);
  if (model.multipower_spec()) {
    const FiberNorms norms = fiber_norms(*model.multipower_spec(), u);
    const DescartesCertificate cert =
        descartes_certificate(*model.multipower_spec(), model.dim(), norms);
    json c;
    c["numeric_only"] = cert.numeric_only;
    if (!cert.numeric_only) {
      c["m"] = cert.m;
      c["sign_changes"] = cert.sign_changes;
      c["max_positive_roots"] = cert.max_positive_roots;
      c["at_most_two"] = cert.at_most_two;
      c["curvature_sign_changes"] = cert.curvature_sign_changes;
      c["j2_certified"] = cert.j2_certified;
      c["small_s_shape"] = cert.small_s_shape;
      json terms = json::array();
      for (const auto& t : cert.terms) {
        json tj;
        tj["exponent_times_m"] = t.exp_num;
        tj["coefficient"] = t.coefficient;
        terms.push_back(tj);
      }
      c["terms"] = terms;
    }
    j["descartes"] = c;
  }
  write_json(fs::path(o.out) / "fiber_report.json", j);
  std::cout << "J1=" << (scan.j1 ? "pass" : "fail")
            << " J2=" << (scan.j2 ? "pass" : "fail");
  if (scan.t_u) std::cout << " t_u=" << *scan.t_u;
  std::cout << "\n";
  return kOk;
}

int cmd_evolve(const CommonOpts& o, const std::string& field_path,
               const std::string& reference_path) {
  const NonlinearityModel model = load_model(o.model_path);
  GridPtr grid = make_grid(model.dim(), o.rmax, o.n);
  RadialField psi0 = read_field_csv(field_path, grid);
  std::optional<RadialField> reference;
  if (!reference_path.empty()) reference = read_field_csv(reference_path, grid);

  if (o.s != 1.0) psi0 = scale_star(o.s, psi0);
  if (o.eps > 0.0) {
    std::mt19937 rng(o.seed);
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
        o.eps * std::sqrt(h1_norm_squared(psi0) / h1_norm_squared(pert));
    const double m0 = mass(psi0);
    psi0 = add_scaled(psi0, scale, pert);
    psi0 = (m0 / mass(psi0)) * psi0;
  }

  EvolveOptions eopt;
  eopt.dt = o.dt;
  eopt.t_end = o.t_end;
  const EvolutionTrace tr =
      evolve(model, psi0, eopt, reference ? &*reference : nullptr);

  {
    std::ofstream f(fs::path(o.out) / "trace.csv");
    f.precision(17);
    f << "t,mass,energy,gradnorm,V,M,dist\n";
    for (const auto& r : tr.rows)
      f << r.t << "," << r.mass << "," << r.energy << "," << r.grad << ","
        << r.V << "," << r.M << "," << r.dist << "\n";
  }
  json j;
  j["blown_up"] = tr.blown_up;
  j["blowup_time"] = tr.blowup_time;
  j["step_error"] = tr.step_error;
  j["mass_drift"] = tr.mass_drift;
  j["energy_drift"] = tr.energy_drift;
  json checks = json::array();
  checks.push_back(
      check_entry("conservation.mass_drift", tr.mass_drift <= 1e-10,
                  tr.mass_drift));
  checks.push_back(
      check_entry("conservation.energy_drift", tr.energy_drift <= 1e-6,
                  tr.energy_drift));
  j["checks"] = checks;
  write_json(fs::path(o.out) / "evolve_report.json", j);

  if (tr.step_error) {
    std::cout << "step-size error; suggested dt " << tr.suggested_dt << "\n";
    return kAccuracyError;
  }
  if (tr.blown_up) {
    std::cout << "blow-up detected at t=" << tr.blowup_time << "\n";
    return kBlowupDetected;
  }
  std::cout << "completed T=" << o.t_end << " mass_drift=" << tr.mass_drift
            << " energy_drift=" << tr.energy_drift << "\n";
  return kOk;
}

int cmd_sweep(const CommonOpts& o, const std::vector<double>& rhos) {
  const NonlinearityModel model = load_model(o.model_path);
  GridPtr grid = make_grid(model.dim(), o.rmax, o.n);
  const auto rows = m_curve(model, rhos, grid, {}, o.jobs);
  {
    std::ofstream f(fs::path(o.out) / "m_curve.csv");
    f.precision(17);
    f << "rho,m,R0,iterations,ok,error\n";
    for (const auto& r : rows)
      f << r.rho << "," << r.m << "," << r.R0 << "," << r.iterations << ","
        << (r.ok ? 1 : 0) << "," << r.error << "\n";
  }
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    if (rows[i].ok && rows[i + 1].ok && rows[i].rho < rows[i + 1].rho)
      monotone = monotone && rows[i + 1].m <= rows[i].m + 1e-9;
  json j;
  j["rows"] = rows.size();
  j["checks"] = json::array(
      {check_entry("subadditivity.monotone_nonincreasing", monotone)});
  write_json(fs::path(o.out) / "sweep_report.json", j);
  const bool all_ok =
      std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.ok; });
  std::cout << rows.size() << " rows, " << (all_ok ? "all ok" : "with failures")
            << "\n";
  return all_ok ? kOk : kSolverFailure;
}

int cmd_bounds(const CommonOpts& o, double A, double B, double p, double q) {
  json j;
  if (q > 0.0) {
    const FromBelowResult r = bound_from_below(A, B, p, q);
    j["kind"] = "from_below";
    j["xi"] = r.xi;
    j["x_min"] = r.x_min;
    j["checks"] = json::array(
        {check_entry("scalar_bounds.below_holds", r.x_min >= r.xi, r.x_min)});
    std::cout << "xi=" << r.xi << " x_min=" << r.x_min << "\n";
  } else {
    const FromAboveResult r = bound_from_above(A, B, p);
    j["kind"] = "from_above";
    j["admissible"] = r.admissible;
    j["bound"] = r.bound;
    j["t1"] = r.t1;
    j["checks"] = json::array(
        {check_entry("scalar_bounds.above_holds",
                     !r.admissible || r.t1 <= r.bound + 1e-10, r.t1)});
    std::cout << "admissible=" << r.admissible << " bound=" << r.bound
              << " t1=" << r.t1 << "\n";
  }
  write_json(fs::path(o.out) / "bounds_report.json", j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normalized solitary waves: geometry, solvers, dynamics"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string field_path, reference_path;
  std::vector<double> rhos;
  bool csv = false;
  double sigma = 1.0;
  double A = 1.0, B = 1.0, p = 1.0, q = 0.0;

  auto add_common = [&](CLI::App* cmd, bool needs_model = true) {
    if (needs_model)
      cmd->add_option("--model", o.model_path, "model spec file")->required();
    cmd->add_option("--rho", o.rho, "prescribed mass");
    cmd->add_option("--n", o.n, "grid nodes")->check(CLI::PositiveNumber);
    cmd->add_option("--rmax", o.rmax, "grid radius")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--out", o.out, "output directory");
  };

  CLI::App* c_check = app.add_subcommand("check", "verify model assumptions");
  add_common(c_check);

  CLI::App* c_thr = app.add_subcommand("thresholds", "geometry constants");
  add_common(c_thr);
  c_thr->add_flag("--csv", csv, "emit a (t, g) table");

  CLI::App* c_ground = app.add_subcommand("ground", "local minimizer");
  add_common(c_ground);

  CLI::App* c_exc = app.add_subcommand("excited", "M- minimizer");
  add_common(c_exc);

  CLI::App* c_fiber = app.add_subcommand("fiber", "fibering-map scan");
  add_common(c_fiber);
  c_fiber->add_option("--field", field_path, "field CSV (default: Gaussian)");
  c_fiber->add_option("--sigma", sigma, "Gaussian width for the default field");

  CLI::App* c_evolve = app.add_subcommand("evolve", "time evolution");
  add_common(c_evolve);
  c_evolve->add_option("--field", field_path, "initial field CSV")->required();
  c_evolve->add_option("--reference", reference_path,
                       "reference field for orbital distance");
  c_evolve->add_option("--dt", o.dt, "time step")->check(CLI::PositiveNumber);
  c_evolve->add_option("--T", o.t_end, "horizon")->check(CLI::PositiveNumber);
  c_evolve->add_option("--s", o.s, "apply the mass-preserving scaling first");
  c_evolve->add_option("--eps", o.eps, "seeded smooth perturbation size");

  CLI::App* c_sweep = app.add_subcommand("sweep", "m_{R0}(rho) table");
  add_common(c_sweep);
  c_sweep->add_option("--rhos", rhos, "mass list")->required();
  c_sweep->add_option("--jobs", o.jobs, "worker threads");

  CLI::App* c_bounds = app.add_subcommand("bounds", "scalar bound queries");
  add_common(c_bounds, false);
  c_bounds->add_option("--A", A, "coefficient A")->required();
  c_bounds->add_option("--B", B, "coefficient B")->required();
  c_bounds->add_option("--p", p, "exponent p")->required();
  c_bounds->add_option("--q", q, "exponent q (from-below form)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int rc = kOk;
  std::string command;
  try {
    fs::create_directories(o.out);
    if (app.got_subcommand(c_check)) {
      command = "check";
      rc = cmd_check(o);
    } else if (app.got_subcommand(c_thr)) {
      command = "thresholds";
      rc = cmd_thresholds(o, csv);
    } else if (app.got_subcommand(c_ground)) {
      command = "ground";
      rc = cmd_ground(o);
    } else if (app.got_subcommand(c_exc)) {
      command = "excited";
      rc = cmd_excited(o);
    } else if (app.got_subcommand(c_fiber)) {
      command = "fiber";
      rc = cmd_fiber(o, field_path, sigma);
    } else if (app.got_subcommand(c_evolve)) {
      command = "evolve";
      rc = cmd_evolve(o, field_path, reference_path);
    } else if (app.got_subcommand(c_sweep)) {
      command = "sweep";
      rc = cmd_sweep(o, rhos);
    } else if (app.got_subcommand(c_bounds)) {
      command = "bounds";
      rc = cmd_bounds(o, A, B, p, q);
    }
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << "\n";
    return kAccuracyError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  try {
    write_manifest(o, command, wall);
  } catch (const std::exception& e) {
    std::cerr << "warning: manifest not written: " << e.what() << "\n";
  }
  return rc;
}
