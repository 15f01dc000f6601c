#include <doctest.h>

#include <cmath>

#include "copdes/errors.hpp"
#include "copdes/models.hpp"
#include "copdes/repro.hpp"

using namespace copdes;

TEST_SUITE_BEGIN("models");

TEST_CASE("trend evaluation and gradients") {
  TrendFunction trend1 = TrendFunction::polynomial({0, 1, 2});
  TrendFunction trend2 = TrendFunction::polynomial({1, 3, 4});

  Eigen::VectorXd ones3 = Eigen::VectorXd::Ones(3);
  CHECK(eval_trend(trend1, 0.0, ones3) == doctest::Approx(1.0));
  CHECK(eval_trend(trend2, 1.0, ones3) == doctest::Approx(3.0));
  Eigen::VectorXd beta(3);
  beta << 1.0, 2.0, 4.0;
  CHECK(eval_trend(trend1, 0.5, beta) == doctest::Approx(3.0));  // 1 + 1 + 1

  CHECK(trend_gradient(trend1, 1.0).isApprox(ones3));
  CHECK(trend_gradient(trend2, 0.0).isZero());
  Eigen::VectorXd g = trend_gradient(trend1, 0.38);
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(0.38));
  CHECK(g[2] == doctest::Approx(0.1444));

  Eigen::VectorXd wrong(2);
  wrong << 1.0, 2.0;
  CHECK_THROWS_AS(eval_trend(trend1, 0.5, wrong), validation_error);
}

TEST_CASE("marginal probabilities") {
  BinaryLogisticProblem p = binary_example(CopulaSpec::product(), false);
  CHECK(marginal_prob(p, 1.0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(marginal_prob(p, 4.0, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(marginal_prob(p, 0.0, 1) ==
        doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-15));
  CHECK_THROWS_AS(marginal_prob(p, 0.0, 3), validation_error);

  // Strictly increasing in x for positive slopes.
  double prev = 0.0;
  for (int i = 0; i <= 50; ++i) {
    double v = marginal_prob(p, i * 0.2, 1);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("cell probabilities") {
  BinaryLogisticProblem independent = binary_example(CopulaSpec::product(), false);
  for (double x : {0.0, 2.5, 7.0}) {
    CellProbabilities c = cell_probs(independent, x);
    double pi1 = marginal_prob(independent, x, 1);
    double pi2 = marginal_prob(independent, x, 2);
    CHECK(c.p11 == doctest::Approx(pi1 * pi2).epsilon(1e-14));
  }

  // Clayton cells cross-checked against an inline CDF oracle.
  CopulaSpec clayton = CopulaSpec::make(CopulaFamily::clayton, 8.89);
  BinaryLogisticProblem p = binary_example(clayton, true);
  double x = 2.80;
  double pi1 = marginal_prob(p, x, 1);
  double pi2 = marginal_prob(p, x, 2);
  double c11 =
      std::pow(std::pow(pi1, -8.89) + std::pow(pi2, -8.89) - 1.0, -1.0 / 8.89);
  CellProbabilities c = cell_probs(p, x);
  CHECK(c.p11 == doctest::Approx(c11).epsilon(1e-12));
  CHECK(c.p10 == doctest::Approx(pi1 - c11).epsilon(1e-12));
  CHECK(c.p01 == doctest::Approx(pi2 - c11).epsilon(1e-12));
  CHECK(c.p11 + c.p10 + c.p01 + c.p00 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cell invariants across study parameters on a grid") {
  std::vector<CopulaSpec> specs;
  for (double tau : {0.110018536449, 0.456700958160, 0.665777386272, 0.762576518621,
                     0.816449340236}) {
    for (CopulaFamily family :
         {CopulaFamily::frank, CopulaFamily::clayton, CopulaFamily::gumbel})
      specs.push_back(alpha_from_tau(family, tau));
  }
  for (double tau : {-0.15, -0.05, 0.05, 0.15, 0.35, 0.75}) {
    for (CopulaFamily family :
         {CopulaFamily::fgm, CopulaFamily::clayton, CopulaFamily::frank}) {
      auto [lo, hi] = tau_range(family);
      if (tau <= lo || tau >= hi) continue;
      specs.push_back(alpha_from_tau(family, tau));
    }
  }
  for (const CopulaSpec& spec : specs) {
    BinaryLogisticProblem p = binary_example(spec, true);
    for (int i = 0; i <= 100; ++i) {
      double x = 10.0 * i / 100.0;
      CellProbabilities c = cell_probs(p, x);
      double pi1 = marginal_prob(p, x, 1);
      double pi2 = marginal_prob(p, x, 2);
      for (double cell : {c.p11, c.p10, c.p01, c.p00}) {
        CHECK(cell >= 0.0);
        CHECK(cell <= 1.0);
      }
      CHECK(c.p11 + c.p10 + c.p01 + c.p00 == doctest::Approx(1.0).epsilon(1e-11));
      CHECK(c.p11 <= std::min(pi1, pi2) + 1e-10);
      CHECK(c.p11 >= std::max(pi1 + pi2 - 1.0, 0.0) - 1e-10);
    }
  }
}

TEST_CASE("default localizations") {
  GaussianMarginProblem g =
      linear_example(CopulaSpec::make(CopulaFamily::fgm, 0.45), true);
  LocalParameters lp = g.default_params();
  CHECK(lp.k() == 6);
  CHECK(lp.l() == 1);
  CHECK(*lp.alpha == doctest::Approx(0.45));
  CHECK(g.dim() == 7);

  BinaryLogisticProblem b = binary_example(CopulaSpec::product(), false);
  CHECK(b.dim() == 4);
  CHECK(b.default_params().l() == 0);
  CHECK(working_copula(b).family == CopulaFamily::product);

  BinaryLogisticProblem full = binary_example(CopulaSpec::make(CopulaFamily::frank, 5.0), true);
  CHECK(full.dim() == 5);
  CHECK(working_copula(full).family == CopulaFamily::frank);
  // Ignoring the dependence collapses the working model to independence.
  full.estimate_alpha = false;
  CHECK(working_copula(full).family == CopulaFamily::product);
}

TEST_SUITE_END();
