#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "copdes/config.hpp"
#include "copdes/errors.hpp"

using namespace copdes;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("parsing a full binary config") {
  ProblemConfig cfg = ProblemConfig::from_json_text(R"({
    "schema_version": 1,
    "problem": "binary-logistic",
    "design_space": [0.0, 10.0],
    "beta1": [-1.0, 1.0],
    "beta2": [-2.0, 0.5],
    "copula": {"family": "frank", "tau": 0.45},
    "estimate_alpha": true,
    "optimizer": {"grid_size": 501, "eps_bound": 1e-3}
  })");
  const auto& p = std::get<BinaryLogisticProblem>(cfg.problem);
  CHECK(p.copula.family == CopulaFamily::frank);
  CHECK(p.copula.alpha == doctest::Approx(4.89420211201).epsilon(1e-7));
  CHECK(p.estimate_alpha);
  CHECK(cfg.optimizer.grid_size == 501);
  CHECK(cfg.optimizer.eps_bound == doctest::Approx(1e-3));
  // Unset fields keep their documented defaults.
  CHECK(cfg.optimizer.certify_grid == 2001);
  CHECK(cfg.optimizer.quad_order == 64);
  CHECK(cfg.optimizer.prune_tol_w == doctest::Approx(1e-4));
}

TEST_CASE("continuous defaults") {
  ProblemConfig cfg = ProblemConfig::from_json_text(R"({
    "schema_version": 1,
    "problem": "continuous-linear"
  })");
  const auto& p = std::get<GaussianMarginProblem>(cfg.problem);
  CHECK(p.trend1.powers == std::vector<unsigned>{0, 1, 2});
  CHECK(p.trend2.powers == std::vector<unsigned>{1, 3, 4});
  CHECK(p.lower == 0.0);
  CHECK(p.upper == 1.0);
  CHECK(p.copula.family == CopulaFamily::product);
  CHECK_FALSE(p.estimate_alpha);
}

TEST_CASE("config validation") {
  // Both alpha and tau.
  CHECK_THROWS_AS(ProblemConfig::from_json_text(R"({
    "schema_version": 1, "problem": "binary-logistic",
    "copula": {"family": "frank", "alpha": 5.0, "tau": 0.4}})"),
                  validation_error);
  // Neither alpha nor tau for a parametric family.
  CHECK_THROWS_AS(ProblemConfig::from_json_text(R"({
    "schema_version": 1, "problem": "binary-logistic",
    "copula": {"family": "frank"}})"),
                  validation_error);
  // Product copula cannot have its parameter estimated.
  CHECK_THROWS_AS(ProblemConfig::from_json_text(R"({
    "schema_version": 1, "problem": "binary-logistic",
    "estimate_alpha": true})"),
                  validation_error);
  // Unattainable tau surfaces as attainability_error (a validation error).
  CHECK_THROWS_AS(ProblemConfig::from_json_text(R"({
    "schema_version": 1, "problem": "binary-logistic",
    "copula": {"family": "clayton", "tau": -0.1}})"),
                  validation_error);
  // Unknown family and schema problems.
  CHECK_THROWS_AS(ProblemConfig::from_json_text(R"({
    "schema_version": 1, "problem": "binary-logistic",
    "copula": {"family": "galambos", "alpha": 1.0}})"),
                  validation_error);
  CHECK_THROWS_AS(ProblemConfig::from_json_text(R"({"problem": "binary-logistic"})"),
                  validation_error);
  CHECK_THROWS_AS(ProblemConfig::from_json_text("not json"), validation_error);
}

TEST_CASE("problem hash is stable and discriminating") {
  auto text = [](double alpha) {
    std::ostringstream s;
    s << R"({"schema_version":1,"problem":"binary-logistic","copula":{"family":"frank","alpha":)"
      << alpha << "},\"estimate_alpha\":true}";
    return s.str();
  };
  ProblemConfig a = ProblemConfig::from_json_text(text(5.0));
  ProblemConfig b = ProblemConfig::from_json_text(text(5.0));
  ProblemConfig c = ProblemConfig::from_json_text(text(6.0));
  CHECK(a.problem_hash() == b.problem_hash());
  CHECK(a.problem_hash() != c.problem_hash());
  CHECK(a.problem_hash().size() == 16);
}

TEST_CASE("design file round trip and validation") {
  ProblemConfig cfg = ProblemConfig::from_json_text(
      R"({"schema_version":1,"problem":"continuous-linear"})");
  DesignFile file;
  file.design = DesignMeasure::make({0.0, 0.38, 0.76, 1.0}, {0.16, 0.28, 0.23, 0.33});
  file.meta.problem_hash = cfg.problem_hash();
  file.meta.problem_json = cfg.problem_json();
  file.meta.certified = true;
  file.meta.max_sensitivity = 6.0001;
  file.meta.bound = 6.0;
  file.meta.log_det = -17.9;

  auto path = temp_file("copdes_design_roundtrip.json");
  file.save(path);
  DesignFile loaded = DesignFile::load(path);
  CHECK(loaded.design.points == file.design.points);
  CHECK(loaded.design.weights == file.design.weights);
  CHECK(loaded.meta.problem_hash == file.meta.problem_hash);
  CHECK(loaded.meta.problem_json == file.meta.problem_json);
  CHECK(loaded.meta.certified == file.meta.certified);

  // Weights summing to 0.9 violate the design-measure invariant.
  auto bad = temp_file("copdes_design_bad.json");
  std::ofstream out(bad);
  out << R"({"schema_version":1,"points":[0.0,1.0],"weights":[0.45,0.45]})";
  out.close();
  CHECK_THROWS_AS(DesignFile::load(bad), validation_error);
}

TEST_CASE("csv output is deterministic and round-trippable") {
  std::vector<std::pair<double, double>> profile = {
      {0.0, 5.9993201}, {1.0 / 3.0, 4.123456789012345}, {1.0, 6.0000002}};
  auto p1 = temp_file("copdes_profile_1.csv");
  auto p2 = temp_file("copdes_profile_2.csv");
  write_profile_csv(p1, profile);
  write_profile_csv(p2, profile);
  std::string text = read_all(p1);
  CHECK(text == read_all(p2));
  CHECK(text.find("\r") == std::string::npos);  // LF endings only
  CHECK(text.rfind("x,sensitivity\n", 0) == 0);

  // 17 significant digits reconstruct the double exactly.
  double value = 4.123456789012345;
  CHECK(std::stod(format_g17(value)) == value);
  CHECK(std::stod(format_g17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_SUITE_END();
