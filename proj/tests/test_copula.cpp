#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "copdes/copula.hpp"
#include "copdes/errors.hpp"
#include "copdes/quadrature.hpp"

using namespace copdes;

namespace {

// Finite-difference oracles on the CDF; the analytic partials are checked
// against these, never the other way around.
double fd_partial_u1(const CopulaSpec& s, double u1, double u2, double h = 1e-6) {
  return (cdf(s, u1 + h, u2) - cdf(s, u1 - h, u2)) / (2.0 * h);
}

double fd_partial_u2(const CopulaSpec& s, double u1, double u2, double h = 1e-6) {
  return (cdf(s, u1, u2 + h) - cdf(s, u1, u2 - h)) / (2.0 * h);
}

double fd_partial_alpha(const CopulaSpec& s, double u1, double u2) {
  double h = 1e-6 * std::max(1.0, std::fabs(s.alpha));
  return (cdf(CopulaSpec::make(s.family, s.alpha + h), u1, u2) -
          cdf(CopulaSpec::make(s.family, s.alpha - h), u1, u2)) /
         (2.0 * h);
}

double fd_pdf(const CopulaSpec& s, double u1, double u2, double h = 1e-4) {
  return (cdf(s, u1 + h, u2 + h) - cdf(s, u1 + h, u2 - h) - cdf(s, u1 - h, u2 + h) +
          cdf(s, u1 - h, u2 - h)) /
         (4.0 * h * h);
}

std::vector<CopulaSpec> specimen_specs() {
  return {CopulaSpec::product(),
          CopulaSpec::make(CopulaFamily::gaussian, 0.55),
          CopulaSpec::make(CopulaFamily::gaussian, -0.35),
          CopulaSpec::make(CopulaFamily::fgm, 0.8),
          CopulaSpec::make(CopulaFamily::fgm, -0.6),
          CopulaSpec::make(CopulaFamily::clayton, 2.5),
          CopulaSpec::make(CopulaFamily::frank, 5.0),
          CopulaSpec::make(CopulaFamily::frank, -4.0),
          CopulaSpec::make(CopulaFamily::gumbel, 2.5)};
}

}  // namespace

TEST_SUITE_BEGIN("copula");

TEST_CASE("family names and parameter domains") {
  CHECK(family_from_string("clayton") == CopulaFamily::clayton);
  CHECK(to_string(CopulaFamily::fgm) == "fgm");
  CHECK_THROWS_AS(family_from_string("galambos"), validation_error);

  CHECK_THROWS_AS(CopulaSpec::make(CopulaFamily::gaussian, 1.0), param_domain_error);
  CHECK_THROWS_AS(CopulaSpec::make(CopulaFamily::fgm, 1.2), param_domain_error);
  CHECK_THROWS_AS(CopulaSpec::make(CopulaFamily::clayton, 0.0), param_domain_error);
  CHECK_THROWS_AS(CopulaSpec::make(CopulaFamily::frank, 0.0), param_domain_error);
  CHECK_THROWS_AS(CopulaSpec::make(CopulaFamily::gumbel, 0.99), param_domain_error);
  CHECK_NOTHROW(CopulaSpec::make(CopulaFamily::gumbel, 1.0));
  CHECK_NOTHROW(CopulaSpec::make(CopulaFamily::fgm, -1.0));
}

TEST_CASE("cdf values") {
  CHECK(cdf(CopulaSpec::product(), 0.3, 0.7) == doctest::Approx(0.21).epsilon(1e-15));
  CHECK(cdf(CopulaSpec::make(CopulaFamily::fgm, 1.0), 0.5, 0.5) ==
        doctest::Approx(0.3125).epsilon(1e-15));
  // mpmath references.
  CHECK(cdf(CopulaSpec::make(CopulaFamily::gaussian, 0.5), 0.3, 0.7) ==
        doctest::Approx(0.2669038488673631).epsilon(1e-11));
  CHECK(cdf(CopulaSpec::make(CopulaFamily::frank, 5.0), 0.3, 0.8) ==
        doctest::Approx(0.2920437019144574).epsilon(1e-13));

  for (const CopulaSpec& s : specimen_specs()) {
    for (double u : {0.0, 0.25, 0.5, 1.0}) {
      CHECK(cdf(s, u, 1.0) == doctest::Approx(u).epsilon(1e-15));
      CHECK(cdf(s, 1.0, u) == doctest::Approx(u).epsilon(1e-15));
      CHECK(cdf(s, u, 0.0) == 0.0);
      CHECK(cdf(s, 0.0, u) == 0.0);
    }
  }
  CHECK_THROWS_AS(cdf(CopulaSpec::product(), -0.1, 0.5), validation_error);
}

TEST_CASE("pdf values and boundary policy") {
  CHECK(pdf(CopulaSpec::product(), 0.123, 0.9) == 1.0);
  CHECK(pdf(CopulaSpec::make(CopulaFamily::fgm, 0.45), 0.5, 0.5) ==
        doctest::Approx(1.0).epsilon(1e-15));

  CopulaSpec clayton2 = CopulaSpec::make(CopulaFamily::clayton, 2.0);
  double oracle = fd_pdf(clayton2, 0.5, 0.5);
  CHECK(pdf(clayton2, 0.5, 0.5) == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(pdf(clayton2, 0.5, 0.5) ==
        doctest::Approx(1.481003649342278).epsilon(1e-12));  // closed form

  CHECK_THROWS_AS(pdf(clayton2, 0.0, 0.5), boundary_error);
  CHECK_THROWS_AS(pdf(clayton2, 0.5, 1.0), boundary_error);
  CHECK_NOTHROW(cdf(clayton2, 0.0, 0.5));  // cdf accepts the closed square
}

TEST_CASE("log_pdf") {
  CHECK(log_pdf(CopulaSpec::product(), 0.4, 0.6) == 0.0);
  CHECK(log_pdf(CopulaSpec::make(CopulaFamily::fgm, 0.45), 0.5, 0.5) ==
        doctest::Approx(0.0).epsilon(1e-15));

  CopulaSpec gumbel = CopulaSpec::make(CopulaFamily::gumbel, 5.45);
  CHECK(log_pdf(gumbel, 0.9, 0.9) ==
        doctest::Approx(std::log(pdf(gumbel, 0.9, 0.9))).epsilon(1e-10));
  CHECK(log_pdf(gumbel, 0.9, 0.9) == doctest::Approx(2.60176357202975).epsilon(1e-10));

  // FGM density vanishes toward the corners when |alpha| = 1; the sentinel
  // fires once the value underflows to exactly zero.
  CHECK(std::isinf(log_pdf(CopulaSpec::make(CopulaFamily::fgm, -1.0), 1e-17, 1e-17)));
}

TEST_CASE("partial_u1 and partial_u2") {
  CHECK(partial_u1(CopulaSpec::product(), 0.3, 0.7) == doctest::Approx(0.7));
  CHECK(partial_u2(CopulaSpec::product(), 0.3, 0.7) == doctest::Approx(0.3));
  CHECK(partial_u1(CopulaSpec::make(CopulaFamily::fgm, 1.0), 0.5, 0.5) ==
        doctest::Approx(0.5).epsilon(1e-15));

  for (const CopulaSpec& s : specimen_specs()) {
    for (double u1 : {0.15, 0.5, 0.85}) {
      for (double u2 : {0.2, 0.65, 0.9}) {
        CHECK(std::fabs(partial_u1(s, u1, u2) - fd_partial_u1(s, u1, u2)) <= 1e-7);
        CHECK(std::fabs(partial_u2(s, u1, u2) - fd_partial_u2(s, u1, u2)) <= 1e-7);
      }
    }
  }
  CHECK_THROWS_AS(partial_u1(CopulaSpec::product(), 0.0, 0.5), boundary_error);
}

TEST_CASE("partial_alpha") {
  CHECK(partial_alpha(CopulaSpec::make(CopulaFamily::fgm, 0.3), 0.5, 0.5) ==
        doctest::Approx(0.0625).epsilon(1e-15));
  CHECK_THROWS_AS(partial_alpha(CopulaSpec::product(), 0.5, 0.5), param_domain_error);

  CopulaSpec frank5 = CopulaSpec::make(CopulaFamily::frank, 5.0);
  CHECK(partial_alpha(frank5, 0.3, 0.8) ==
        doctest::Approx(fd_partial_alpha(frank5, 0.3, 0.8)).epsilon(1e-5));
  CHECK(partial_alpha(frank5, 0.3, 0.8) ==
        doctest::Approx(0.00396423715413889).epsilon(1e-9));  // mpmath reference
}

TEST_CASE("kendall tau maps") {
  CHECK(tau_from_alpha(CopulaSpec::make(CopulaFamily::clayton, 6.0)) ==
        doctest::Approx(0.75).epsilon(1e-14));
  CHECK(tau_from_alpha(CopulaSpec::make(CopulaFamily::gumbel, 5.45)) ==
        doctest::Approx(0.8165137614678899).epsilon(1e-14));
  CHECK(tau_from_alpha(CopulaSpec::make(CopulaFamily::gaussian, 0.0)) == 0.0);
  CHECK(tau_from_alpha(CopulaSpec::product()) == 0.0);

  // The published tables label this row tau = 0.45; the Debye-integral value
  // of alpha = 5 is 0.4567 (the label is rounded display, the formula wins).
  CHECK(tau_from_alpha(CopulaSpec::make(CopulaFamily::frank, 5.0)) ==
        doctest::Approx(0.456700958160).epsilon(1e-9));
  CHECK(tau_from_alpha(CopulaSpec::make(CopulaFamily::frank, 1.0)) ==
        doctest::Approx(0.110018536449).epsilon(1e-9));
  CHECK(tau_from_alpha(CopulaSpec::make(CopulaFamily::frank, -1.37)) ==
        doctest::Approx(-0.149453156653).epsilon(1e-9));
}

TEST_CASE("alpha from tau") {
  CHECK(alpha_from_tau(CopulaFamily::fgm, 0.10).alpha ==
        doctest::Approx(0.45).epsilon(1e-15));
  CHECK(alpha_from_tau(CopulaFamily::gumbel, 0.0).alpha == doctest::Approx(1.0));
  CHECK(alpha_from_tau(CopulaFamily::frank, 0.45).alpha ==
        doctest::Approx(4.89420211201).epsilon(1e-8));  // mpmath root
  CHECK(alpha_from_tau(CopulaFamily::product, 0.0).family == CopulaFamily::product);

  CHECK_THROWS_AS(alpha_from_tau(CopulaFamily::clayton, -0.05), attainability_error);
  CHECK_THROWS_AS(alpha_from_tau(CopulaFamily::clayton, -0.10), attainability_error);
  CHECK_THROWS_AS(alpha_from_tau(CopulaFamily::fgm, 0.5), attainability_error);
  CHECK_THROWS_AS(alpha_from_tau(CopulaFamily::gumbel, -0.1), attainability_error);
  CHECK_THROWS_AS(alpha_from_tau(CopulaFamily::product, 0.1), attainability_error);
  CHECK_THROWS_AS(alpha_from_tau(CopulaFamily::frank, 0.0), attainability_error);
}

TEST_CASE("boundary axioms on a grid") {
  for (const CopulaSpec& s : specimen_specs()) {
    for (int i = 0; i <= 10; ++i) {
      double u = i / 10.0;
      CHECK(std::fabs(cdf(s, u, 1.0) - u) <= 1e-12);
      CHECK(std::fabs(cdf(s, 1.0, u) - u) <= 1e-12);
      CHECK(std::fabs(cdf(s, u, 0.0)) <= 1e-12);
      CHECK(std::fabs(cdf(s, 0.0, u)) <= 1e-12);
    }
  }
}

TEST_CASE("two-increasing property on random rectangles") {
  std::mt19937 rng(20240515);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const CopulaSpec& s : specimen_specs()) {
    for (int rep = 0; rep < 1000; ++rep) {
      double a = unit(rng), b = unit(rng), c = unit(rng), d = unit(rng);
      double u1 = std::min(a, b), u3 = std::max(a, b);
      double u2 = std::min(c, d), u4 = std::max(c, d);
      double volume =
          cdf(s, u3, u4) - cdf(s, u3, u2) - cdf(s, u1, u4) + cdf(s, u1, u2);
      CHECK(volume >= -1e-12);
    }
  }
}

TEST_CASE("density normalization") {
  // Tensor Gauss-Legendre order 64 reaches 1e-6 for the families whose
  // density stays bounded near the corners.
  GaussLegendre line = GaussLegendre::make(64);
  auto tensor_mass = [&](const CopulaSpec& s) {
    double mass = 0.0;
    for (int i = 0; i < line.order; ++i)
      for (int j = 0; j < line.order; ++j)
        mass += line.weights[i] * line.weights[j] *
                pdf(s, line.nodes[i], line.nodes[j]);
    return mass;
  };
  for (const CopulaSpec& s :
       {CopulaSpec::product(), CopulaSpec::make(CopulaFamily::fgm, 0.9),
        CopulaSpec::make(CopulaFamily::frank, 5.0),
        CopulaSpec::make(CopulaFamily::frank, -14.1),
        CopulaSpec::make(CopulaFamily::gaussian, 0.3)}) {
    CHECK(tensor_mass(s) == doctest::Approx(1.0).epsilon(1e-6));
  }

  // For every family, including the corner-divergent ones at strong
  // dependence, the density must reproduce the CDF's rectangle volumes.
  auto rectangle_mass = [](const CopulaSpec& s, double a, double b) {
    auto inner = [&](double u1) {
      return integrate_adaptive([&](double u2) { return pdf(s, u1, u2); }, a, b, 1e-11);
    };
    return integrate_adaptive(inner, a, b, 1e-10);
  };
  for (const CopulaSpec& s :
       {CopulaSpec::make(CopulaFamily::clayton, 6.0),
        CopulaSpec::make(CopulaFamily::gumbel, 4.0),
        CopulaSpec::make(CopulaFamily::gaussian, 0.7),
        CopulaSpec::make(CopulaFamily::frank, 20.0),
        CopulaSpec::make(CopulaFamily::fgm, -1.0)}) {
    double a = 0.2, b = 0.8;
    double volume = cdf(s, b, b) - cdf(s, b, a) - cdf(s, a, b) + cdf(s, a, a);
    CHECK(rectangle_mass(s, a, b) == doctest::Approx(volume).epsilon(1e-8));
  }
}

TEST_CASE("conditional distribution bounds and monotonicity") {
  for (const CopulaSpec& s : specimen_specs()) {
    for (double u1 : {0.1, 0.45, 0.8}) {
      double prev = -1e-9;
      for (int j = 1; j < 20; ++j) {
        double u2 = j / 20.0;
        double v = partial_u1(s, u1, u2);
        CHECK(v >= -1e-9);
        CHECK(v <= 1.0 + 1e-9);
        CHECK(v >= prev - 1e-12);  // nondecreasing in u2
        prev = v;
      }
    }
  }
}

TEST_CASE("tau round trips across attainable ranges") {
  struct Range {
    CopulaFamily family;
    double lo, hi;
  };
  const Range ranges[] = {
      {CopulaFamily::gaussian, -0.95, 0.95}, {CopulaFamily::fgm, -0.22, 0.22},
      {CopulaFamily::clayton, 0.02, 0.93},   {CopulaFamily::gumbel, 0.0, 0.93},
      {CopulaFamily::frank, -0.93, 0.93},
  };
  for (const Range& r : ranges) {
    for (int i = 0; i <= 12; ++i) {
      double tau = r.lo + (r.hi - r.lo) * i / 12.0;
      if (r.family == CopulaFamily::frank && std::fabs(tau) < 1e-3) continue;
      CopulaSpec s = alpha_from_tau(r.family, tau);
      CHECK(std::fabs(tau_from_alpha(s) - tau) <= 1e-8);
    }
  }
}

TEST_CASE("analytic partials match finite differences on random points") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> interior(0.05, 0.95);
  for (const CopulaSpec& s : specimen_specs()) {
    for (int rep = 0; rep < 100; ++rep) {
      double u1 = interior(rng), u2 = interior(rng);
      CHECK(std::fabs(partial_u1(s, u1, u2) - fd_partial_u1(s, u1, u2)) <= 1e-6);
      CHECK(std::fabs(partial_u2(s, u1, u2) - fd_partial_u2(s, u1, u2)) <= 1e-6);
      if (s.has_alpha())
        CHECK(std::fabs(partial_alpha(s, u1, u2) - fd_partial_alpha(s, u1, u2)) <=
              1e-6 * std::max(1.0, std::fabs(partial_alpha(s, u1, u2))));
    }
  }
}

TEST_CASE("log-density derivatives match finite differences") {
  std::mt19937 rng(778);
  std::uniform_real_distribution<double> interior(0.08, 0.92);
  for (const CopulaSpec& s : specimen_specs()) {
    if (!s.has_alpha()) continue;
    for (int rep = 0; rep < 40; ++rep) {
      double u1 = interior(rng), u2 = interior(rng);
      double h = 1e-7;
      double fd1 = (log_pdf(s, u1 + h, u2) - log_pdf(s, u1 - h, u2)) / (2.0 * h);
      double fd2 = (log_pdf(s, u1, u2 + h) - log_pdf(s, u1, u2 - h)) / (2.0 * h);
      double ha = 1e-7 * std::max(1.0, std::fabs(s.alpha));
      double fda = (log_pdf(CopulaSpec::make(s.family, s.alpha + ha), u1, u2) -
                    log_pdf(CopulaSpec::make(s.family, s.alpha - ha), u1, u2)) /
                   (2.0 * ha);
      CHECK(dlogpdf_du1(s, u1, u2) ==
            doctest::Approx(fd1).epsilon(1e-5).scale(std::max(1.0, std::fabs(fd1))));
      CHECK(dlogpdf_du2(s, u1, u2) ==
            doctest::Approx(fd2).epsilon(1e-5).scale(std::max(1.0, std::fabs(fd2))));
      CHECK(dlogpdf_dalpha(s, u1, u2) ==
            doctest::Approx(fda).epsilon(1e-5).scale(std::max(1.0, std::fabs(fda))));
    }
  }
}

TEST_CASE("conditional quantile inverts the conditional distribution") {
  for (const CopulaSpec& s : specimen_specs()) {
    for (double u1 : {0.08, 0.4, 0.77}) {
      for (double t : {0.12, 0.5, 0.9}) {
        double u2 = conditional_quantile(s, t, u1);
        CHECK((u2 > 0.0 && u2 < 1.0));
        CHECK(partial_u1(s, u1, u2) == doctest::Approx(t).epsilon(1e-9));
      }
    }
  }
  // Strong-dependence parameters exercised by the studies.
  for (const CopulaSpec& s : {CopulaSpec::make(CopulaFamily::clayton, 8.9),
                              CopulaSpec::make(CopulaFamily::gumbel, 5.45),
                              CopulaSpec::make(CopulaFamily::frank, 20.0)}) {
    double u2 = conditional_quantile(s, 0.3, 0.6);
    CHECK(partial_u1(s, 0.6, u2) == doctest::Approx(0.3).epsilon(1e-8));
  }
}

TEST_SUITE_END();
