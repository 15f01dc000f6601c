#include "copdes/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "copdes/errors.hpp"

namespace copdes {

using nlohmann::json;

namespace {

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw validation_error("invalid JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

void require_schema(const json& j, const char* what) {
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != 1)
    throw validation_error(std::string(what) + ": schema_version must be 1");
}

CopulaSpec parse_copula(const json& j, bool* tau_given) {
  *tau_given = false;
  if (!j.contains("copula")) return CopulaSpec::product();
  const json& c = j["copula"];
  CopulaFamily family = family_from_string(c.at("family").get<std::string>());
  bool has_alpha = c.contains("alpha");
  bool has_tau = c.contains("tau");
  if (family == CopulaFamily::product) {
    if (has_alpha || has_tau)
      throw validation_error("product copula takes neither alpha nor tau");
    return CopulaSpec::product();
  }
  if (has_alpha == has_tau)
    throw validation_error("give exactly one of copula.alpha or copula.tau");
  if (has_alpha) return CopulaSpec::make(family, c["alpha"].get<double>());
  *tau_given = true;
  return alpha_from_tau(family, c["tau"].get<double>());
}

TrendFunction parse_trend(const json& j, const char* key,
                          std::vector<unsigned> default_powers, Eigen::VectorXd* beta) {
  std::vector<unsigned> powers = default_powers;
  std::vector<double> coeffs;
  if (j.contains(key)) {
    const json& t = j[key];
    if (t.contains("powers")) powers = t["powers"].get<std::vector<unsigned>>();
    if (t.contains("beta")) coeffs = t["beta"].get<std::vector<double>>();
  }
  if (coeffs.empty()) coeffs.assign(powers.size(), 0.0);
  if (coeffs.size() != powers.size())
    throw validation_error(std::string(key) + ": beta length must match powers");
  *beta = Eigen::Map<Eigen::VectorXd>(coeffs.data(), coeffs.size());
  return TrendFunction::polynomial(powers);
}

void parse_optimizer(const json& j, OptimizerConfig* cfg) {
  if (!j.contains("optimizer")) return;
  const json& o = j["optimizer"];
  auto get_int = [&](const char* key, int* out) {
    if (o.contains(key)) *out = o.at(key).get<int>();
  };
  auto get_dbl = [&](const char* key, double* out) {
    if (o.contains(key)) *out = o.at(key).get<double>();
  };
  get_int("grid_size", &cfg->grid_size);
  get_int("max_iters", &cfg->max_iters);
  get_dbl("eps_bound", &cfg->eps_bound);
  get_int("refine_iters", &cfg->refine_iters);
  get_dbl("merge_tol_x", &cfg->merge_tol_x);
  get_dbl("prune_tol_w", &cfg->prune_tol_w);
  get_int("certify_grid", &cfg->certify_grid);
  get_dbl("tol_cert", &cfg->tol_cert);
  get_int("quad_order", &cfg->quad_order);
  get_int("outer_rounds", &cfg->outer_rounds);
}

json problem_to_json(const Problem& problem) {
  json j;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        j["design_space"] = {p.lower, p.upper};
        j["estimate_alpha"] = p.estimate_alpha;
        if (p.copula.family == CopulaFamily::product) {
          j["copula"] = {{"family", "product"}};
        } else {
          j["copula"] = {{"family", std::string(to_string(p.copula.family))},
                         {"alpha", p.copula.alpha}};
        }
        if constexpr (std::is_same_v<T, GaussianMarginProblem>) {
          j["problem"] = "continuous-linear";
          j["trend1"] = {{"powers", p.trend1.powers}};
          j["trend2"] = {{"powers", p.trend2.powers}};
        } else {
          j["problem"] = "binary-logistic";
          j["beta1"] = {p.beta1[0], p.beta1[1]};
          j["beta2"] = {p.beta2[0], p.beta2[1]};
        }
      },
      problem);
  return j;
}

uint64_t fnv1a64(std::string_view text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

ProblemConfig ProblemConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw validation_error(std::string("invalid JSON: ") + e.what());
  }
  require_schema(j, "problem config");

  ProblemConfig cfg;
  std::string kind = j.at("problem").get<std::string>();
  bool tau_given = false;
  CopulaSpec copula = parse_copula(j, &tau_given);
  bool estimate_alpha = copula.has_alpha();
  if (j.contains("estimate_alpha")) estimate_alpha = j["estimate_alpha"].get<bool>();
  if (estimate_alpha && !copula.has_alpha())
    throw validation_error("estimate_alpha requires a parametric copula");

  try {
    if (kind == "continuous-linear") {
      GaussianMarginProblem p;
      Eigen::VectorXd b1, b2;
      p.trend1 = parse_trend(j, "trend1", {0, 1, 2}, &b1);
      p.trend2 = parse_trend(j, "trend2", {1, 3, 4}, &b2);
      p.copula = copula;
      p.estimate_alpha = estimate_alpha;
      p.lower = 0.0;
      p.upper = 1.0;
      if (j.contains("design_space")) {
        p.lower = j["design_space"].at(0).get<double>();
        p.upper = j["design_space"].at(1).get<double>();
      }
      if (!(p.lower < p.upper))
        throw validation_error("design_space must satisfy a < b");
      cfg.problem = p;
    } else if (kind == "binary-logistic") {
      BinaryLogisticProblem p;
      p.beta1 << -1.0, 1.0;
      p.beta2 << -2.0, 0.5;
      if (j.contains("beta1"))
        p.beta1 << j["beta1"].at(0).get<double>(), j["beta1"].at(1).get<double>();
      if (j.contains("beta2"))
        p.beta2 << j["beta2"].at(0).get<double>(), j["beta2"].at(1).get<double>();
      p.copula = copula;
      p.estimate_alpha = estimate_alpha;
      p.lower = 0.0;
      p.upper = 10.0;
      if (j.contains("design_space")) {
        p.lower = j["design_space"].at(0).get<double>();
        p.upper = j["design_space"].at(1).get<double>();
      }
      if (!(p.lower < p.upper))
        throw validation_error("design_space must satisfy a < b");
      cfg.problem = p;
    } else {
      throw validation_error("problem must be continuous-linear or binary-logistic");
    }
  } catch (const json::exception& e) {
    throw validation_error(std::string("problem config: ") + e.what());
  }

  try {
    parse_optimizer(j, &cfg.optimizer);
  } catch (const json::exception& e) {
    throw validation_error(std::string("optimizer config: ") + e.what());
  }
  return cfg;
}

ProblemConfig ProblemConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

std::string problem_json(const Problem& problem) {
  return problem_to_json(problem).dump();
}

std::string problem_hash(const Problem& problem) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(problem_json(problem)));
  return buf;
}

std::string ProblemConfig::problem_json() const { return copdes::problem_json(problem); }

std::string ProblemConfig::problem_hash() const { return copdes::problem_hash(problem); }

DesignFile DesignFile::load(const std::filesystem::path& path) {
  json j = parse_file(path);
  require_schema(j, "design file");
  DesignFile f;
  try {
    f.design = DesignMeasure::make(j.at("points").get<std::vector<double>>(),
                                   j.at("weights").get<std::vector<double>>());
    if (j.contains("metadata")) {
      const json& m = j["metadata"];
      f.meta.problem_hash = m.value("problem_hash", std::string{});
      if (m.contains("problem")) f.meta.problem_json = m["problem"].dump();
      f.meta.certified = m.value("certified", false);
      f.meta.max_sensitivity = m.value("max_sensitivity", 0.0);
      f.meta.bound = m.value("bound", 0.0);
      f.meta.log_det = m.value("log_det", 0.0);
    }
  } catch (const json::exception& e) {
    throw validation_error(std::string("design file: ") + e.what());
  }
  return f;
}

void DesignFile::save(const std::filesystem::path& path) const {
  json j;
  j["schema_version"] = 1;
  j["points"] = design.points;
  j["weights"] = design.weights;
  j["metadata"] = {{"problem_hash", meta.problem_hash},
                   {"certified", meta.certified},
                   {"max_sensitivity", meta.max_sensitivity},
                   {"bound", meta.bound},
                   {"log_det", meta.log_det}};
  if (!meta.problem_json.empty())
    j["metadata"]["problem"] = json::parse(meta.problem_json);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {
std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) throw validation_error("cannot write " + path.string());
  return out;
}
}  // namespace

void write_profile_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<double, double>>& profile) {
  auto out = open_csv(path);
  out << "x,sensitivity\n";
  for (const auto& [x, d] : profile) out << format_g17(x) << "," << format_g17(d) << "\n";
}

void write_trace_csv(const std::filesystem::path& path, const OptimizationTrace& trace) {
  auto out = open_csv(path);
  out << "iteration,criterion,max_sensitivity,support_size\n";
  for (const TraceEntry& e : trace.entries)
    out << e.iteration << "," << format_g17(e.criterion) << ","
        << format_g17(e.max_sensitivity) << "," << e.support_size << "\n";
}

void write_loss_table_csv(const std::filesystem::path& path, const LossTable& table) {
  auto out = open_csv(path);
  out << "family,tau,alpha,loss_percent,status\n";
  for (const LossRow& r : table.rows) {
    out << to_string(r.family) << "," << format_g17(r.tau) << ",";
    if (r.alpha) out << format_g17(*r.alpha);
    out << ",";
    if (r.loss_percent) out << format_g17(*r.loss_percent);
    out << "," << r.status << "\n";
  }
}

void write_misspec_table_csv(const std::filesystem::path& path, const MisspecTable& table) {
  auto out = open_csv(path);
  out << "tau,true_family,assumed_family,loss_percent,status\n";
  for (const MisspecCell& c : table.cells) {
    out << format_g17(c.tau) << "," << to_string(c.true_family) << ","
        << to_string(c.assumed_family) << ",";
    if (c.loss_percent) out << format_g17(*c.loss_percent);
    out << "," << c.status << "\n";
  }
}

void write_matrix_csv(const std::filesystem::path& path, const InfoMatrix& m) {
  auto out = open_csv(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_g17(m(i, j));
    }
    out << "\n";
  }
}

std::string loss_table_text(const LossTable& table) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %8s %10s %10s  %s\n", "family", "tau", "alpha",
                "loss[%]", "status");
  out << line;
  for (const LossRow& r : table.rows) {
    char alpha_s[32] = "-", loss_s[32] = "-";
    if (r.alpha) std::snprintf(alpha_s, sizeof alpha_s, "%.4f", *r.alpha);
    if (r.loss_percent) std::snprintf(loss_s, sizeof loss_s, "%.2f", *r.loss_percent);
    std::snprintf(line, sizeof line, "%-10s %8.2f %10s %10s  %s\n",
                  std::string(to_string(r.family)).c_str(), r.tau, alpha_s, loss_s,
                  r.status.c_str());
    out << line;
  }
  return out.str();
}

std::string misspec_table_text(const MisspecTable& table) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%8s %-10s %-10s %10s  %s\n", "tau", "true",
                "assumed", "loss[%]", "status");
  out << line;
  for (const MisspecCell& c : table.cells) {
    char loss_s[32] = "-";
    if (c.loss_percent) std::snprintf(loss_s, sizeof loss_s, "%.2f", *c.loss_percent);
    std::snprintf(line, sizeof line, "%8.2f %-10s %-10s %10s  %s\n", c.tau,
                  std::string(to_string(c.true_family)).c_str(),
                  std::string(to_string(c.assumed_family)).c_str(), loss_s,
                  c.status.c_str());
    out << line;
  }
  return out.str();
}

std::string design_text(const DesignMeasure& design) {
  std::ostringstream out;
  out << "  x:";
  for (double x : design.points) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %9.4f", x);
    out << buf;
  }
  out << "\n  w:";
  for (double w : design.weights) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %9.4f", w);
    out << buf;
  }
  out << "\n";
  return out.str();
}

}  // namespace copdes
