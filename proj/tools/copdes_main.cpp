// Command-line front end for locally D-optimal design computation under
// bivariate copula models: optimization, equivalence-theorem certification,
// efficiency comparison, Kendall-tau conversions and the reproduction
// harness for the reference studies.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "copdes/config.hpp"
#include "copdes/errors.hpp"
#include "copdes/repro.hpp"

namespace {

// Exit codes: 0 ok/certified, 1 input error, 2 numerical error,
// 3 not converged, 4 not certified, 5 repro mismatch.
enum ExitCode {
  kOk = 0,
  kInputError = 1,
  kNumericalError = 2,
  kNotConverged = 3,
  kNotCertified = 4,
  kReproMismatch = 5,
};

int cmd_optimize(const std::string& config_path, const std::string& out_path,
                 const std::string& trace_path, int quad_order) {
  copdes::ProblemConfig config = copdes::ProblemConfig::load(config_path);
  if (quad_order > 0) config.optimizer.quad_order = quad_order;
  copdes::OptimizeResult result = copdes::fedorov_wynn(
      config.problem, copdes::problem_default_params(config.problem),
      config.optimizer);

  copdes::QuadratureRule quad =
      copdes::QuadratureRule::make(config.optimizer.quad_order);
  copdes::FimEvaluator fim(config.problem,
                           copdes::problem_default_params(config.problem), quad);

  std::cout << "design (" << result.design.size() << " support points):\n"
            << copdes::design_text(result.design);
  std::printf("log det M = %.10f\n",
              copdes::log_det(copdes::design_fim(result.design, fim)));
  std::printf("max sensitivity %.6f vs bound %g -> %s\n",
              result.report.max_sensitivity, result.report.bound,
              result.report.certified ? "certified" : "NOT certified");

  if (!out_path.empty()) {
    copdes::DesignFile file;
    file.design = result.design;
    file.meta.problem_hash = config.problem_hash();
    file.meta.problem_json = config.problem_json();
    file.meta.certified = result.report.certified;
    file.meta.max_sensitivity = result.report.max_sensitivity;
    file.meta.bound = result.report.bound;
    file.meta.log_det = copdes::log_det(copdes::design_fim(result.design, fim));
    file.save(out_path);
    std::cout << "design written to " << out_path << "\n";
  }
  if (!trace_path.empty()) {
    copdes::write_trace_csv(trace_path, result.trace);
    std::cout << "trace written to " << trace_path << "\n";
  }
  if (!result.converged) return kNotConverged;
  return result.report.certified ? kOk : kNotCertified;
}

int cmd_check(const std::string& design_path, const std::string& config_path,
              int grid, double tol, const std::string& profile_path, int quad_order) {
  copdes::ProblemConfig config = copdes::ProblemConfig::load(config_path);
  if (quad_order > 0) config.optimizer.quad_order = quad_order;
  copdes::DesignFile file = copdes::DesignFile::load(design_path);
  if (!file.meta.problem_hash.empty() &&
      file.meta.problem_hash != config.problem_hash())
    std::cerr << "warning: design file was produced for a different problem (hash "
              << file.meta.problem_hash << " vs " << config.problem_hash() << ")\n";

  copdes::QuadratureRule quad =
      copdes::QuadratureRule::make(config.optimizer.quad_order);
  copdes::FimEvaluator fim(config.problem,
                           copdes::problem_default_params(config.problem), quad);
  copdes::CertificationReport report =
      copdes::certify(file.design, fim, grid, tol);

  if (!report.reason.empty() && report.profile.empty()) {
    std::cerr << "error: " << report.reason << "\n";
    return kNumericalError;
  }
  std::printf("max sensitivity %.6f at x = %.6f, bound %g, tolerance %g\n",
              report.max_sensitivity, report.argmax_x, report.bound, tol);
  std::cout << (report.certified ? "certified D-optimal\n" : "not certified\n");
  if (!profile_path.empty()) {
    copdes::write_profile_csv(profile_path, report.profile);
    std::cout << "profile written to " << profile_path << "\n";
  }
  return report.certified ? kOk : kNotCertified;
}

int cmd_efficiency(const std::string& design_a, const std::string& design_b,
                   const std::string& config_path, int quad_order) {
  copdes::ProblemConfig config = copdes::ProblemConfig::load(config_path);
  if (quad_order > 0) config.optimizer.quad_order = quad_order;
  copdes::DesignFile a = copdes::DesignFile::load(design_a);
  copdes::DesignFile b = copdes::DesignFile::load(design_b);
  copdes::QuadratureRule quad =
      copdes::QuadratureRule::make(config.optimizer.quad_order);
  copdes::FimEvaluator fim(config.problem,
                           copdes::problem_default_params(config.problem), quad);
  double ratio = copdes::d_efficiency(a.design, b.design, fim);
  std::printf("D-efficiency %.6f, loss %.2f%%\n", ratio, 100.0 * (1.0 - ratio));
  return kOk;
}

int cmd_tau(const std::string& family_name, double tau, double alpha, bool has_tau,
            bool has_alpha) {
  copdes::CopulaFamily family = copdes::family_from_string(family_name);
  if (has_tau == has_alpha)
    throw copdes::validation_error("give exactly one of --tau or --alpha");
  if (has_tau) {
    copdes::CopulaSpec spec = copdes::alpha_from_tau(family, tau);
    std::printf("alpha = %.10g\n", spec.alpha);
  } else {
    copdes::CopulaSpec spec = copdes::CopulaSpec::make(family, alpha);
    std::printf("tau = %.10g\n", copdes::tau_from_alpha(spec));
  }
  return kOk;
}

int cmd_profile(const std::string& design_path, const std::string& config_path,
                int grid, const std::string& out_path, int quad_order) {
  copdes::ProblemConfig config = copdes::ProblemConfig::load(config_path);
  if (quad_order > 0) config.optimizer.quad_order = quad_order;
  copdes::DesignFile file = copdes::DesignFile::load(design_path);
  copdes::QuadratureRule quad =
      copdes::QuadratureRule::make(config.optimizer.quad_order);
  copdes::FimEvaluator fim(config.problem,
                           copdes::problem_default_params(config.problem), quad);
  copdes::CertificationReport report =
      copdes::certify(file.design, fim, grid, config.optimizer.tol_cert);
  if (report.profile.empty()) {
    std::cerr << "error: " << report.reason << "\n";
    return kNumericalError;
  }
  copdes::write_profile_csv(out_path, report.profile);
  std::cout << "profile (" << report.profile.size() << " rows) written to "
            << out_path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locally D-optimal designs for bivariate copula models"};
  app.require_subcommand(1);

  std::string config_path, out_path, trace_path, design_path;
  std::string design_a, design_b, family, target, out_dir = "repro_out";
  double tau = 0.0, alpha = 0.0, tol = 1e-3;
  int grid = 2001, quad_order = 0;

  auto* optimize = app.add_subcommand("optimize", "run the D-optimal design search");
  optimize->add_option("--config", config_path, "problem config (JSON)")->required();
  optimize->add_option("--out", out_path, "design file to write (JSON)");
  optimize->add_option("--trace", trace_path, "iteration trace CSV to write");
  optimize->add_option("--quad-order", quad_order, "override the quadrature order");

  auto* check = app.add_subcommand("check", "certify a design via the sensitivity bound");
  check->add_option("design", design_path, "design file (JSON)")->required();
  check->add_option("--config", config_path, "problem config (JSON)")->required();
  check->add_option("--grid", grid, "certification grid size (default 2001)");
  check->add_option("--tol", tol, "relative tolerance on the bound (default 1e-3)");
  check->add_option("--profile", out_path, "write the sensitivity profile CSV here");
  check->add_option("--quad-order", quad_order, "override the quadrature order");

  auto* efficiency = app.add_subcommand("efficiency", "D-efficiency of one design vs another");
  efficiency->add_option("design_a", design_a, "candidate design file")->required();
  efficiency->add_option("design_b", design_b, "reference design file")->required();
  efficiency->add_option("--config", config_path, "problem config (JSON)")->required();
  efficiency->add_option("--quad-order", quad_order, "override the quadrature order");

  auto* tau_cmd = app.add_subcommand("tau", "convert between Kendall tau and alpha");
  tau_cmd->add_option("family", family, "copula family name")->required();
  auto* tau_opt = tau_cmd->add_option("--tau", tau, "Kendall tau to convert to alpha");
  auto* alpha_opt = tau_cmd->add_option("--alpha", alpha, "alpha to convert to tau");

  auto* profile = app.add_subcommand("sensitivity-profile", "export d(x, xi) as CSV");
  profile->add_option("design", design_path, "design file (JSON)")->required();
  profile->add_option("--config", config_path, "problem config (JSON)")->required();
  profile->add_option("--grid", grid, "grid size (default 2001)");
  profile->add_option("--out", out_path, "output CSV path")->required();
  profile->add_option("--quad-order", quad_order, "override the quadrature order");

  auto* repro = app.add_subcommand("repro", "reproduce a reference study end to end");
  repro->add_option("target", target,
                    "fedorov | corollary | table1 | table2 | table3 | binary-benchmark")
      ->required();
  repro->add_option("--out", out_dir, "output directory (default repro_out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;  // bad usage is an input error
  }

  try {
    if (optimize->parsed())
      return cmd_optimize(config_path, out_path, trace_path, quad_order);
    if (check->parsed())
      return cmd_check(design_path, config_path, grid, tol, out_path, quad_order);
    if (efficiency->parsed())
      return cmd_efficiency(design_a, design_b, config_path, quad_order);
    if (tau_cmd->parsed())
      return cmd_tau(family, tau, alpha, tau_opt->count() > 0, alpha_opt->count() > 0);
    if (profile->parsed())
      return cmd_profile(design_path, config_path, grid, out_path, quad_order);
    if (repro->parsed()) return copdes::run_repro(target, out_dir, std::cout);
  } catch (const copdes::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const copdes::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const copdes::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
