#include "copdes/repro.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "copdes/errors.hpp"

namespace copdes {

namespace {

// Exact Kendall tau of the Frank family at the anchor parameters 1, 5, 10,
// 15, 20 used by the published binary studies; the other families' rows are
// localized at alpha_from_tau of these values, which matches the published
// per-cell alpha to its printed precision.
const std::vector<double> kBinaryTauAnchors = {0.110018536449, 0.456700958160,
                                               0.665777386272, 0.762576518621,
                                               0.816449340236};

// Published benchmark design of the dependence-ignoring binary model.
DesignMeasure published_binary_benchmark() {
  return DesignMeasure::make({0.0, 2.80, 6.79}, {0.42, 0.36, 0.22});
}

// Published four-point design of the independence linear example.
const std::vector<double> kLinearPoints = {0.0, 0.38, 0.76, 1.0};
const std::vector<double> kLinearWeights = {0.16, 0.28, 0.23, 0.33};

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

void add_check(ReproResult* result, const std::string& name, bool pass,
               const std::string& detail, bool in_scope = true) {
  result->checks.push_back({name, pass, in_scope, detail});
}

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<std::vector<std::string>>& rows,
                          const std::string& header) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write " + path.string());
  out << header << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

OptimizerConfig default_config() { return OptimizerConfig{}; }

}  // namespace

GaussianMarginProblem linear_example(const CopulaSpec& copula, bool estimate_alpha) {
  GaussianMarginProblem p;
  p.trend1 = TrendFunction::polynomial({0, 1, 2});
  p.trend2 = TrendFunction::polynomial({1, 3, 4});
  p.copula = copula;
  p.estimate_alpha = estimate_alpha;
  p.lower = 0.0;
  p.upper = 1.0;
  return p;
}

BinaryLogisticProblem binary_example(const CopulaSpec& copula, bool estimate_alpha) {
  BinaryLogisticProblem p;
  p.beta1 << -1.0, 1.0;
  p.beta2 << -2.0, 0.5;
  p.copula = copula;
  p.estimate_alpha = estimate_alpha;
  p.lower = 0.0;
  p.upper = 10.0;
  return p;
}

ReproResult repro_fedorov(const std::filesystem::path& out_dir) {
  ReproResult result;
  Problem problem = linear_example(CopulaSpec::product(), false);
  OptimizerConfig config = default_config();
  OptimizeResult opt = fedorov_wynn(problem, problem_default_params(problem), config);

  bool size_ok = opt.design.size() == 4;
  add_check(&result, "support size 4", size_ok,
            fmt("found %d support points", opt.design.size()));
  if (size_ok) {
    for (int i = 0; i < 4; ++i) {
      double dx = std::fabs(opt.design.points[i] - kLinearPoints[i]);
      double dw = std::fabs(opt.design.weights[i] - kLinearWeights[i]);
      add_check(&result, fmt("point %d within 0.02", i), dx <= 0.02,
                fmt("computed %.4f, reference %.2f", opt.design.points[i],
                    kLinearPoints[i]));
      add_check(&result, fmt("weight %d within 0.02", i), dw <= 0.02,
                fmt("computed %.4f, reference %.2f", opt.design.weights[i],
                    kLinearWeights[i]));
    }
  }
  add_check(&result, "certified at 2001-point grid, tol 1e-3",
            opt.report.certified && opt.report.max_sensitivity <= 6.0 * 1.001,
            fmt("max sensitivity %.6f (bound 6)", opt.report.max_sensitivity));

  if (!out_dir.empty()) {
    QuadratureRule quad = QuadratureRule::make(config.quad_order);
    FimEvaluator fim(problem, problem_default_params(problem), quad);
    DesignFile file;
    file.design = opt.design;
    file.meta.problem_hash = problem_hash(problem);
    file.meta.problem_json = problem_json(problem);
    file.meta.certified = opt.report.certified;
    file.meta.max_sensitivity = opt.report.max_sensitivity;
    file.meta.bound = opt.report.bound;
    file.meta.log_det = log_det(design_fim(opt.design, fim));
    file.save(out_dir / "fedorov_design.json");
    write_profile_csv(out_dir / "fedorov_profile.csv", opt.report.profile);
    write_trace_csv(out_dir / "fedorov_trace.csv", opt.trace);
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < opt.design.size() && size_ok; ++i) {
      rows.push_back({fmt("%d", i), format_g17(opt.design.points[i]),
                      format_g17(kLinearPoints[i]), format_g17(opt.design.weights[i]),
                      format_g17(kLinearWeights[i])});
    }
    write_comparison_csv(out_dir / "fedorov_comparison.csv", rows,
                         "index,point,point_reference,weight,weight_reference");
  }
  return result;
}

ReproResult repro_corollary(const std::filesystem::path& out_dir) {
  ReproResult result;
  OptimizerConfig config = default_config();
  QuadratureRule quad = QuadratureRule::make(config.quad_order);

  Problem independence = linear_example(CopulaSpec::product(), false);
  OptimizeResult base =
      fedorov_wynn(independence, problem_default_params(independence), config);

  double merge_tol = 1e-3;  // canonicalization tolerance over [0, 1]
  std::vector<std::vector<std::string>> rows;
  for (double alpha : {0.0, 0.3, 0.7}) {
    Problem full =
        linear_example(CopulaSpec::make(CopulaFamily::gaussian, alpha), true);
    OptimizeResult opt = fedorov_wynn(full, problem_default_params(full), config);

    bool coincide = opt.design.size() == base.design.size();
    double max_dx = 0.0, max_dw = 0.0;
    if (coincide) {
      for (int i = 0; i < opt.design.size(); ++i) {
        max_dx = std::max(max_dx,
                          std::fabs(opt.design.points[i] - base.design.points[i]));
        max_dw = std::max(max_dw,
                          std::fabs(opt.design.weights[i] - base.design.weights[i]));
      }
      coincide = max_dx <= merge_tol && max_dw <= 0.01;
    }
    add_check(&result, fmt("alpha=%.1f optimum coincides with independence", alpha),
              coincide, fmt("max point shift %.5f (tol %.0e), max weight shift %.5f",
                            max_dx, merge_tol, max_dw));

    FimEvaluator fim(full, problem_default_params(full), quad);
    double eff = d_efficiency(base.design, opt.design, fim);
    add_check(&result, fmt("alpha=%.1f independence efficiency >= 0.999", alpha),
              eff >= 0.999, fmt("efficiency %.6f", eff));
    add_check(&result, fmt("alpha=%.1f max sensitivity 7 +- 0.05", alpha),
              std::fabs(opt.report.max_sensitivity - 7.0) <= 0.05,
              fmt("max sensitivity %.5f", opt.report.max_sensitivity));
    rows.push_back({format_g17(alpha), format_g17(eff),
                    format_g17(opt.report.max_sensitivity), format_g17(max_dx),
                    format_g17(max_dw)});
    if (!out_dir.empty())
      write_profile_csv(out_dir / fmt("corollary_profile_alpha_%02.0f.csv", alpha * 10),
                        opt.report.profile);
  }
  write_comparison_csv(out_dir.empty() ? "" : out_dir / "corollary_summary.csv", rows,
                       "alpha,independence_efficiency,max_sensitivity,"
                       "max_point_shift,max_weight_shift");
  return result;
}

namespace {

struct PublishedLossCell {
  CopulaFamily family;
  double tau;
  double loss;      // NaN marks an n.d. cell
  bool in_scope;
};

ReproResult check_loss_table(const LossTable& table,
                             const std::vector<PublishedLossCell>& published,
                             double tol, const std::filesystem::path& csv_path,
                             const std::filesystem::path& comparison_path) {
  ReproResult result;
  if (!csv_path.empty()) {
    write_loss_table_csv(csv_path, table);
    std::ofstream txt(std::filesystem::path(csv_path).replace_extension(".txt"));
    txt << loss_table_text(table);
  }
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < published.size(); ++i) {
    const PublishedLossCell& ref = published[i];
    const LossRow& row = table.rows.at(i);
    std::string name = fmt("%s tau=%+.2f", std::string(to_string(ref.family)).c_str(),
                           ref.tau);
    if (std::isnan(ref.loss)) {
      bool pass = row.status == "n.d.";
      add_check(&result, name + " is n.d.", pass, "status " + row.status);
      rows.push_back({std::string(to_string(ref.family)), format_g17(ref.tau), "n.d.",
                      row.status, "", ref.in_scope ? "yes" : "no",
                      pass ? "pass" : "fail"});
      continue;
    }
    if (!row.loss_percent) {
      add_check(&result, name, false, "no loss computed: " + row.status, ref.in_scope);
      rows.push_back({std::string(to_string(ref.family)), format_g17(ref.tau),
                      format_g17(ref.loss), row.status, "", ref.in_scope ? "yes" : "no",
                      "fail"});
      continue;
    }
    double delta = *row.loss_percent - ref.loss;
    bool pass = std::fabs(delta) <= tol;
    add_check(&result, name,
              pass, fmt("computed %.3f, published %.2f, delta %+.3f", *row.loss_percent,
                        ref.loss, delta),
              ref.in_scope);
    rows.push_back({std::string(to_string(ref.family)), format_g17(ref.tau),
                    format_g17(*row.loss_percent), format_g17(ref.loss),
                    format_g17(delta), ref.in_scope ? "yes" : "no",
                    pass ? "pass" : "fail"});
  }
  write_comparison_csv(comparison_path, rows,
                       "family,tau,loss_percent,published,delta,in_scope,verdict");
  return result;
}

}  // namespace

ReproResult repro_table1(const std::filesystem::path& out_dir) {
  OptimizerConfig config = default_config();

  // Benchmark: the certified optimum of the independence model (matching the
  // published four-point design within its printed precision).
  Problem independence = linear_example(CopulaSpec::product(), false);
  DesignMeasure benchmark =
      fedorov_wynn(independence, problem_default_params(independence), config).design;

  const double nd = std::nan("");
  std::vector<PublishedLossCell> published = {
      {CopulaFamily::fgm, -0.15, 17.37, false},  // flagged outlier, reported only
      {CopulaFamily::fgm, -0.10, 0.23, true},
      {CopulaFamily::fgm, -0.05, 0.59, true},
      {CopulaFamily::fgm, 0.05, 0.68, true},
      {CopulaFamily::fgm, 0.10, 0.39, true},
      {CopulaFamily::fgm, 0.15, 10.18, false},  // flagged outlier, reported only
      {CopulaFamily::fgm, 0.35, nd, true},
      {CopulaFamily::fgm, 0.75, nd, true},
      {CopulaFamily::clayton, -0.15, nd, true},
      {CopulaFamily::clayton, -0.10, nd, true},
      {CopulaFamily::clayton, -0.05, nd, true},
      {CopulaFamily::clayton, 0.05, 0.16, true},
      {CopulaFamily::clayton, 0.10, 0.13, true},
      {CopulaFamily::clayton, 0.15, 0.34, true},
      {CopulaFamily::clayton, 0.35, 0.11, true},
      {CopulaFamily::clayton, 0.75, 0.27, true},
      {CopulaFamily::frank, -0.15, 0.10, true},
      {CopulaFamily::frank, -0.10, 0.10, true},
      {CopulaFamily::frank, -0.05, 0.10, true},
      {CopulaFamily::frank, 0.05, 0.10, true},
      {CopulaFamily::frank, 0.10, 0.10, true},
      {CopulaFamily::frank, 0.15, 0.10, true},
      {CopulaFamily::frank, 0.35, 0.11, true},
      {CopulaFamily::frank, 0.75, 0.16, true},
  };

  std::vector<std::pair<CopulaFamily, double>> rows;
  for (const PublishedLossCell& c : published) rows.emplace_back(c.family, c.tau);
  LossTable table = ignorance_loss_table(linear_example(CopulaSpec::product(), true),
                                         rows, benchmark, config);
  return check_loss_table(table, published, 0.3,
                          out_dir.empty() ? "" : out_dir / "table1.csv",
                          out_dir.empty() ? "" : out_dir / "table1_comparison.csv");
}

ReproResult repro_table2(const std::filesystem::path& out_dir) {
  OptimizerConfig config = default_config();
  const std::vector<double>& taus = kBinaryTauAnchors;
  std::vector<PublishedLossCell> published;
  const double frank_losses[] = {1.72, 1.31, 1.87, 2.89, 3.10};
  const double clayton_losses[] = {1.75, 1.49, 0.71, 2.84, 9.48};
  const double gumbel_losses[] = {0.95, 1.29, 2.31, 2.99, 3.25};
  std::vector<std::pair<CopulaFamily, double>> rows;
  for (size_t i = 0; i < taus.size(); ++i) {
    published.push_back({CopulaFamily::frank, taus[i], frank_losses[i], true});
    rows.emplace_back(CopulaFamily::frank, taus[i]);
  }
  for (size_t i = 0; i < taus.size(); ++i) {
    published.push_back({CopulaFamily::clayton, taus[i], clayton_losses[i], true});
    rows.emplace_back(CopulaFamily::clayton, taus[i]);
  }
  for (size_t i = 0; i < taus.size(); ++i) {
    published.push_back({CopulaFamily::gumbel, taus[i], gumbel_losses[i], true});
    rows.emplace_back(CopulaFamily::gumbel, taus[i]);
  }

  // Losses are taken against the published benchmark itself, since the
  // published cells embed it.
  LossTable table =
      ignorance_loss_table(binary_example(CopulaSpec::product(), true), rows,
                           published_binary_benchmark(), config);
  return check_loss_table(table, published, 0.5,
                          out_dir.empty() ? "" : out_dir / "table2.csv",
                          out_dir.empty() ? "" : out_dir / "table2_comparison.csv");
}

ReproResult repro_table3(const std::filesystem::path& out_dir) {
  ReproResult result;
  OptimizerConfig config = default_config();

  const std::vector<std::pair<CopulaFamily, CopulaFamily>> pairs = {
      {CopulaFamily::frank, CopulaFamily::clayton},
      {CopulaFamily::frank, CopulaFamily::gumbel},
      {CopulaFamily::clayton, CopulaFamily::frank},
      {CopulaFamily::clayton, CopulaFamily::gumbel},
      {CopulaFamily::gumbel, CopulaFamily::frank},
      {CopulaFamily::gumbel, CopulaFamily::clayton},
      // Diagonal entries, published implicitly as zero.
      {CopulaFamily::frank, CopulaFamily::frank},
      {CopulaFamily::clayton, CopulaFamily::clayton},
      {CopulaFamily::gumbel, CopulaFamily::gumbel},
  };
  const double published[5][6] = {
      {2.24, 0.67, 1.99, 2.70, 0.82, 2.75},
      {0.26, 0.03, 0.26, 0.11, 0.03, 0.15},
      {1.09, 0.11, 1.04, 1.28, 0.14, 1.57},
      {4.27, 0.02, 3.87, 4.08, 0.01, 4.73},
      {8.24, 0.01, 10.91, 10.96, 0.01, 8.43},
  };

  MisspecTable table = misspecification_table(
      binary_example(CopulaSpec::product(), true), kBinaryTauAnchors, pairs, config);
  if (!out_dir.empty()) {
    write_misspec_table_csv(out_dir / "table3.csv", table);
    std::ofstream txt(out_dir / "table3.txt");
    txt << misspec_table_text(table);
  }

  std::vector<std::vector<std::string>> rows;
  for (size_t t = 0; t < kBinaryTauAnchors.size(); ++t) {
    for (size_t c = 0; c < pairs.size(); ++c) {
      const MisspecCell& cell = table.cells.at(t * pairs.size() + c);
      std::string name =
          fmt("tau=%.2f true=%s assumed=%s", kBinaryTauAnchors[t],
              std::string(to_string(cell.true_family)).c_str(),
              std::string(to_string(cell.assumed_family)).c_str());
      if (c >= 6) {
        bool pass = cell.loss_percent && *cell.loss_percent == 0.0;
        add_check(&result, name + " diagonal exactly 0", pass,
                  cell.loss_percent ? fmt("loss %.17g", *cell.loss_percent)
                                    : cell.status);
        continue;
      }
      double ref = published[t][c];
      bool pass = cell.loss_percent && std::fabs(*cell.loss_percent - ref) <= 1.0;
      add_check(&result, name, pass,
                cell.loss_percent ? fmt("computed %.3f, published %.2f, delta %+.3f",
                                        *cell.loss_percent, ref,
                                        *cell.loss_percent - ref)
                                  : cell.status);
      rows.push_back({format_g17(kBinaryTauAnchors[t]),
                      std::string(to_string(cell.true_family)),
                      std::string(to_string(cell.assumed_family)),
                      cell.loss_percent ? format_g17(*cell.loss_percent) : "",
                      format_g17(ref),
                      cell.loss_percent ? format_g17(*cell.loss_percent - ref) : "",
                      pass ? "pass" : "fail"});
    }
  }
  write_comparison_csv(out_dir.empty() ? "" : out_dir / "table3_comparison.csv", rows,
                       "tau,true_family,assumed_family,loss_percent,published,delta,"
                       "verdict");
  return result;
}

ReproResult repro_binary_benchmark(const std::filesystem::path& out_dir) {
  ReproResult result;
  OptimizerConfig config = default_config();
  DesignMeasure reference = published_binary_benchmark();

  std::vector<DesignMeasure> designs;
  for (CopulaFamily family :
       {CopulaFamily::frank, CopulaFamily::clayton, CopulaFamily::gumbel}) {
    CopulaSpec spec = alpha_from_tau(family, 0.45670095816);
    Problem problem = binary_example(spec, false);  // alpha-ignoring model
    OptimizeResult opt = fedorov_wynn(problem, problem_default_params(problem), config);
    designs.push_back(opt.design);
    add_check(&result,
              fmt("%s: ignore-alpha optimum certified",
                  std::string(to_string(family)).c_str()),
              opt.report.certified,
              fmt("max sensitivity %.6f (bound 4)", opt.report.max_sensitivity));
  }

  bool identical = true;
  for (size_t i = 1; i < designs.size(); ++i)
    identical = identical && designs[i].points == designs[0].points &&
                designs[i].weights == designs[0].weights;
  add_check(&result, "identical across frank/clayton/gumbel", identical,
            identical ? "bit-identical designs" : "designs differ");

  const DesignMeasure& d = designs[0];
  bool size_ok = d.size() == 3;
  add_check(&result, "support size 3", size_ok, fmt("found %d points", d.size()));
  if (size_ok) {
    for (int i = 0; i < 3; ++i) {
      add_check(&result, fmt("point %d within 0.05", i),
                std::fabs(d.points[i] - reference.points[i]) <= 0.05,
                fmt("computed %.4f, published %.2f", d.points[i], reference.points[i]));
      add_check(&result, fmt("weight %d within 0.02", i),
                std::fabs(d.weights[i] - reference.weights[i]) <= 0.02,
                fmt("computed %.4f, published %.2f", d.weights[i],
                    reference.weights[i]));
    }
  }

  if (!out_dir.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < d.size(); ++i)
      rows.push_back({fmt("%d", i), format_g17(d.points[i]),
                      i < reference.size() ? format_g17(reference.points[i]) : "",
                      format_g17(d.weights[i]),
                      i < reference.size() ? format_g17(reference.weights[i]) : ""});
    write_comparison_csv(out_dir / "binary_benchmark_comparison.csv", rows,
                         "index,point,point_published,weight,weight_published");
  }
  return result;
}

int run_repro(const std::string& target, const std::filesystem::path& out_dir,
              std::ostream& log) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  ReproResult result;
  if (target == "fedorov")
    result = repro_fedorov(out_dir);
  else if (target == "corollary")
    result = repro_corollary(out_dir);
  else if (target == "table1")
    result = repro_table1(out_dir);
  else if (target == "table2")
    result = repro_table2(out_dir);
  else if (target == "table3")
    result = repro_table3(out_dir);
  else if (target == "binary-benchmark")
    result = repro_binary_benchmark(out_dir);
  else
    throw validation_error("unknown repro target: " + target);

  for (const CheckLine& c : result.checks) {
    log << (c.pass ? "[pass] " : "[FAIL] ") << c.name;
    if (!c.in_scope) log << " (out of comparison scope)";
    if (!c.detail.empty()) log << " - " << c.detail;
    log << "\n";
  }
  log << (result.pass() ? "result: all in-scope checks passed\n"
                        : "result: in-scope mismatches present\n");
  return result.pass() ? 0 : 5;
}

}  // namespace copdes
