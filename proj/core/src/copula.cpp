#include "copdes/copula.hpp"

#include <cmath>
#include <limits>

#include "copdes/errors.hpp"
#include "copdes/normal.hpp"
#include "copdes/quadrature.hpp"

namespace copdes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_interior(double u1, double u2) {
  if (!(u1 > 0.0 && u1 < 1.0 && u2 > 0.0 && u2 < 1.0))
    throw boundary_error("copula density/partial requires u1, u2 in the open unit square");
}

void require_unit(double u1, double u2) {
  if (!(u1 >= 0.0 && u1 <= 1.0 && u2 >= 0.0 && u2 <= 1.0))
    throw validation_error("copula cdf requires u1, u2 in [0, 1]");
}

// ln(u1^-a + u2^-a - 1) without overflow; exponents a1 = -a ln u1 etc. are
// positive for interior u.
double clayton_log_a(double a, double u1, double u2) {
  double a1 = -a * std::log(u1);
  double a2 = -a * std::log(u2);
  double m = std::max(a1, a2);
  double inner = std::exp(a1 - m) + std::exp(a2 - m) - std::exp(-m);
  if (inner <= 0.0) return -kInf;  // defensive; cannot happen for a > 0 interior
  return m + std::log(inner);
}

// Frank, a > 0 only (negative a handled by reflection at the call sites):
// B = e^-a*u1 + e^-a*u2 - e^-a - e^-a(u1+u2) = -(D + g1 g2) > 0.
double frank_b(double a, double u1, double u2) {
  return std::exp(-a * u1) + std::exp(-a * u2) - std::exp(-a) - std::exp(-a * (u1 + u2));
}

struct GumbelParts {
  double t1, t2, lt1, lt2, ln_s, p, r1, r2;
};

GumbelParts gumbel_parts(double a, double u1, double u2) {
  GumbelParts g;
  g.t1 = -std::log(u1);
  g.t2 = -std::log(u2);
  g.lt1 = std::log(g.t1);
  g.lt2 = std::log(g.t2);
  double hi = std::max(g.lt1, g.lt2);
  double lo = std::min(g.lt1, g.lt2);
  g.ln_s = a * hi + std::log1p(std::exp(a * (lo - hi)));
  g.p = std::exp(g.ln_s / a);
  g.r1 = std::exp(a * g.lt1 - g.ln_s);
  g.r2 = std::exp(a * g.lt2 - g.ln_s);
  return g;
}

double frank_cdf_pos(double a, double u1, double u2) {
  return -std::log1p(std::expm1(-a * u1) * std::expm1(-a * u2) / std::expm1(-a)) / a;
}

double frank_log_pdf_pos(double a, double u1, double u2) {
  double b = frank_b(a, u1, u2);
  if (b <= 0.0) return -kInf;
  return std::log(a) + std::log1p(-std::exp(-a)) - a * (u1 + u2) - 2.0 * std::log(b);
}

double frank_partial_u1_pos(double a, double u1, double u2) {
  double b = frank_b(a, u1, u2);
  return std::exp(-a * u1) * (-std::expm1(-a * u2)) / b;
}

double frank_partial_alpha_pos(double a, double u1, double u2) {
  double g1 = std::expm1(-a * u1);
  double g2 = std::expm1(-a * u2);
  double d = std::expm1(-a);
  double h = 1.0 + g1 * g2 / d;
  double g1p = -u1 * std::exp(-a * u1);
  double g2p = -u2 * std::exp(-a * u2);
  double dp = -std::exp(-a);
  double hp = (g1p * g2 + g1 * g2p - g1 * g2 * dp / d) / d;
  return std::log(h) / (a * a) - hp / (a * h);
}

double frank_dlog_du1_pos(double a, double u1, double u2) {
  double b = frank_b(a, u1, u2);
  return -a + 2.0 * a * std::exp(-a * u1) * (-std::expm1(-a * u2)) / b;
}

double frank_dlog_dalpha_pos(double a, double u1, double u2) {
  double b = frank_b(a, u1, u2);
  double db = -u1 * std::exp(-a * u1) - u2 * std::exp(-a * u2) + std::exp(-a) +
              (u1 + u2) * std::exp(-a * (u1 + u2));
  return 1.0 / a + std::exp(-a) / (-std::expm1(-a)) - (u1 + u2) - 2.0 * db / b;
}

double frank_cond_quantile_pos(double a, double t, double u1) {
  return u1 - std::log1p(t * std::expm1(-a * (1.0 - u1))) / a +
         std::log((1.0 - t) * std::exp(-a * u1) + t) / a;
}

}  // namespace

CopulaFamily family_from_string(std::string_view name) {
  if (name == "product") return CopulaFamily::product;
  if (name == "gaussian") return CopulaFamily::gaussian;
  if (name == "fgm") return CopulaFamily::fgm;
  if (name == "clayton") return CopulaFamily::clayton;
  if (name == "frank") return CopulaFamily::frank;
  if (name == "gumbel") return CopulaFamily::gumbel;
  throw validation_error("unknown copula family: " + std::string(name));
}

std::string_view to_string(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::product: return "product";
    case CopulaFamily::gaussian: return "gaussian";
    case CopulaFamily::fgm: return "fgm";
    case CopulaFamily::clayton: return "clayton";
    case CopulaFamily::frank: return "frank";
    case CopulaFamily::gumbel: return "gumbel";
  }
  throw validation_error("invalid copula family tag");
}

CopulaSpec CopulaSpec::make(CopulaFamily family, double alpha) {
  if (family != CopulaFamily::product && !std::isfinite(alpha))
    throw param_domain_error("copula parameter must be finite");
  switch (family) {
    case CopulaFamily::product:
      return CopulaSpec{family, 0.0};
    case CopulaFamily::gaussian:
      if (!(alpha > -1.0 && alpha < 1.0))
        throw param_domain_error("gaussian copula requires alpha in (-1, 1)");
      break;
    case CopulaFamily::fgm:
      if (!(alpha >= -1.0 && alpha <= 1.0))
        throw param_domain_error("fgm copula requires alpha in [-1, 1]");
      break;
    case CopulaFamily::clayton:
      if (!(alpha > 0.0))
        throw param_domain_error("clayton copula requires alpha > 0");
      break;
    case CopulaFamily::frank:
      if (alpha == 0.0)
        throw param_domain_error("frank copula requires alpha != 0");
      break;
    case CopulaFamily::gumbel:
      if (!(alpha >= 1.0))
        throw param_domain_error("gumbel copula requires alpha >= 1");
      break;
  }
  return CopulaSpec{family, alpha};
}

double cdf(const CopulaSpec& spec, double u1, double u2) {
  require_unit(u1, u2);
  // Axiom boundaries are exact for every family.
  if (u1 == 0.0 || u2 == 0.0) return 0.0;
  if (u1 == 1.0) return u2;
  if (u2 == 1.0) return u1;
  double a = spec.alpha;
  switch (spec.family) {
    case CopulaFamily::product:
      return u1 * u2;
    case CopulaFamily::gaussian:
      if (a == 0.0) return u1 * u2;
      return bvn_cdf(norm_quantile(u1), norm_quantile(u2), a);
    case CopulaFamily::fgm:
      return u1 * u2 * (1.0 + a * (1.0 - u1) * (1.0 - u2));
    case CopulaFamily::clayton: {
      double ln_a = clayton_log_a(a, u1, u2);
      if (ln_a == -kInf) return 0.0;
      return std::exp(-ln_a / a);
    }
    case CopulaFamily::frank:
      if (a > 0.0) return frank_cdf_pos(a, u1, u2);
      return u2 - frank_cdf_pos(-a, 1.0 - u1, u2);
    case CopulaFamily::gumbel:
      return std::exp(-gumbel_parts(a, u1, u2).p);
  }
  throw validation_error("invalid copula family tag");
}

double log_pdf(const CopulaSpec& spec, double u1, double u2) {
  require_interior(u1, u2);
  double a = spec.alpha;
  switch (spec.family) {
    case CopulaFamily::product:
      return 0.0;
    case CopulaFamily::gaussian: {
      if (a == 0.0) return 0.0;
      double z1 = norm_quantile(u1), z2 = norm_quantile(u2);
      double s = 1.0 - a * a;
      return -0.5 * std::log(s) + a * (2.0 * z1 * z2 - a * (z1 * z1 + z2 * z2)) / (2.0 * s);
    }
    case CopulaFamily::fgm: {
      double c = 1.0 + a * (1.0 - 2.0 * u1) * (1.0 - 2.0 * u2);
      return c > 0.0 ? std::log(c) : -kInf;
    }
    case CopulaFamily::clayton: {
      double ln_a = clayton_log_a(a, u1, u2);
      return std::log1p(a) - (a + 1.0) * (std::log(u1) + std::log(u2)) -
             (1.0 / a + 2.0) * ln_a;
    }
    case CopulaFamily::frank:
      if (a > 0.0) return frank_log_pdf_pos(a, u1, u2);
      return frank_log_pdf_pos(-a, 1.0 - u1, u2);
    case CopulaFamily::gumbel: {
      GumbelParts g = gumbel_parts(a, u1, u2);
      return -g.p + (a - 1.0) * (g.lt1 + g.lt2) + (g.t1 + g.t2) +
             (1.0 / a - 2.0) * g.ln_s + std::log(g.p + a - 1.0);
    }
  }
  throw validation_error("invalid copula family tag");
}

double pdf(const CopulaSpec& spec, double u1, double u2) {
  switch (spec.family) {
    case CopulaFamily::product:
      require_interior(u1, u2);
      return 1.0;
    case CopulaFamily::fgm:
      require_interior(u1, u2);
      return 1.0 + spec.alpha * (1.0 - 2.0 * u1) * (1.0 - 2.0 * u2);
    default:
      return std::exp(log_pdf(spec, u1, u2));
  }
}

double partial_u1(const CopulaSpec& spec, double u1, double u2) {
  require_interior(u1, u2);
  double a = spec.alpha;
  switch (spec.family) {
    case CopulaFamily::product:
      return u2;
    case CopulaFamily::gaussian: {
      if (a == 0.0) return u2;
      double z1 = norm_quantile(u1), z2 = norm_quantile(u2);
      return norm_cdf((z2 - a * z1) / std::sqrt(1.0 - a * a));
    }
    case CopulaFamily::fgm:
      return u2 * (1.0 + a * (1.0 - 2.0 * u1) * (1.0 - u2));
    case CopulaFamily::clayton: {
      double ln_a = clayton_log_a(a, u1, u2);
      return std::exp(-(a + 1.0) * std::log(u1) - (1.0 / a + 1.0) * ln_a);
    }
    case CopulaFamily::frank:
      if (a > 0.0) return frank_partial_u1_pos(a, u1, u2);
      return frank_partial_u1_pos(-a, 1.0 - u1, u2);
    case CopulaFamily::gumbel: {
      GumbelParts g = gumbel_parts(a, u1, u2);
      return std::exp(-g.p + (1.0 / a - 1.0) * g.ln_s + (a - 1.0) * g.lt1 + g.t1);
    }
  }
  throw validation_error("invalid copula family tag");
}

double partial_u2(const CopulaSpec& spec, double u1, double u2) {
  // Every family here is exchangeable; Frank's negative-alpha reflection is
  // handled inside partial_u1.
  if (spec.family == CopulaFamily::frank && spec.alpha < 0.0) {
    require_interior(u1, u2);
    // d/du2 [u2 - C_{-a}(1-u1, u2)] = 1 - partial_u2(-a; 1-u1, u2).
    return 1.0 - partial_u1(CopulaSpec{CopulaFamily::frank, -spec.alpha}, u2, 1.0 - u1);
  }
  return partial_u1(spec, u2, u1);
}

double partial_alpha(const CopulaSpec& spec, double u1, double u2) {
  if (spec.family == CopulaFamily::product)
    throw param_domain_error("product copula has no parameter");
  require_interior(u1, u2);
  double a = spec.alpha;
  switch (spec.family) {
    case CopulaFamily::gaussian:
      // Plackett: dPhi2/drho is the bivariate normal density.
      return bvn_pdf(norm_quantile(u1), norm_quantile(u2), a);
    case CopulaFamily::fgm:
      return u1 * u2 * (1.0 - u1) * (1.0 - u2);
    case CopulaFamily::clayton: {
      double a1 = -a * std::log(u1);
      double a2 = -a * std::log(u2);
      double m = std::max(a1, a2);
      double denom = std::exp(a1 - m) + std::exp(a2 - m) - std::exp(-m);
      double dln_a = (a1 * std::exp(a1 - m) + a2 * std::exp(a2 - m)) / (a * denom);
      double ln_a = m + std::log(denom);
      return std::exp(-ln_a / a) * (ln_a / (a * a) - dln_a / a);
    }
    case CopulaFamily::frank:
      if (a > 0.0) return frank_partial_alpha_pos(a, u1, u2);
      return frank_partial_alpha_pos(-a, 1.0 - u1, u2);
    case CopulaFamily::gumbel: {
      GumbelParts g = gumbel_parts(a, u1, u2);
      double w = g.r1 * g.lt1 + g.r2 * g.lt2;
      return -std::exp(-g.p) * g.p * (w / a - g.ln_s / (a * a));
    }
    default:
      throw validation_error("invalid copula family tag");
  }
}

double dlogpdf_du1(const CopulaSpec& spec, double u1, double u2) {
  require_interior(u1, u2);
  double a = spec.alpha;
  switch (spec.family) {
    case CopulaFamily::product:
      return 0.0;
    case CopulaFamily::gaussian: {
      if (a == 0.0) return 0.0;
      double z1 = norm_quantile(u1), z2 = norm_quantile(u2);
      return a * (z2 - a * z1) / ((1.0 - a * a) * norm_pdf(z1));
    }
    case CopulaFamily::fgm: {
      double c = 1.0 + a * (1.0 - 2.0 * u1) * (1.0 - 2.0 * u2);
      return -2.0 * a * (1.0 - 2.0 * u2) / c;
    }
    case CopulaFamily::clayton: {
      double ln_a = clayton_log_a(a, u1, u2);
      return -(a + 1.0) / u1 +
             (1.0 + 2.0 * a) * std::exp(-(a + 1.0) * std::log(u1) - ln_a);
    }
    case CopulaFamily::frank:
      if (a > 0.0) return frank_dlog_du1_pos(a, u1, u2);
      return -frank_dlog_du1_pos(-a, 1.0 - u1, u2);
    case CopulaFamily::gumbel: {
      GumbelParts g = gumbel_parts(a, u1, u2);
      double core = g.p * g.r1 - (a - 1.0) - (1.0 - 2.0 * a) * g.r1 -
                    g.p * g.r1 / (g.p + a - 1.0);
      return core / (u1 * g.t1) - 1.0 / u1;
    }
  }
  throw validation_error("invalid copula family tag");
}

double dlogpdf_du2(const CopulaSpec& spec, double u1, double u2) {
  if (spec.family == CopulaFamily::frank && spec.alpha < 0.0) {
    require_interior(u1, u2);
    // log c(u1, u2; a) = log c(1-u1, u2; -a); the u2 slot is unreflected.
    CopulaSpec pos{CopulaFamily::frank, -spec.alpha};
    return dlogpdf_du1(pos, u2, 1.0 - u1);
  }
  return dlogpdf_du1(spec, u2, u1);
}

double dlogpdf_dalpha(const CopulaSpec& spec, double u1, double u2) {
  if (spec.family == CopulaFamily::product)
    throw param_domain_error("product copula has no parameter");
  require_interior(u1, u2);
  double a = spec.alpha;
  switch (spec.family) {
    case CopulaFamily::gaussian: {
      double z1 = norm_quantile(u1), z2 = norm_quantile(u2);
      double s = 1.0 - a * a;
      return a / s + (z1 * z2 * (1.0 + a * a) - a * (z1 * z1 + z2 * z2)) / (s * s);
    }
    case CopulaFamily::fgm: {
      double c = 1.0 + a * (1.0 - 2.0 * u1) * (1.0 - 2.0 * u2);
      return (1.0 - 2.0 * u1) * (1.0 - 2.0 * u2) / c;
    }
    case CopulaFamily::clayton: {
      double a1 = -a * std::log(u1);
      double a2 = -a * std::log(u2);
      double m = std::max(a1, a2);
      double denom = std::exp(a1 - m) + std::exp(a2 - m) - std::exp(-m);
      double ln_a = m + std::log(denom);
      double dln_a = (a1 * std::exp(a1 - m) + a2 * std::exp(a2 - m)) / (a * denom);
      return 1.0 / (1.0 + a) - (std::log(u1) + std::log(u2)) + ln_a / (a * a) -
             (1.0 / a + 2.0) * dln_a;
    }
    case CopulaFamily::frank:
      if (a > 0.0) return frank_dlog_dalpha_pos(a, u1, u2);
      return -frank_dlog_dalpha_pos(-a, 1.0 - u1, u2);
    case CopulaFamily::gumbel: {
      GumbelParts g = gumbel_parts(a, u1, u2);
      double w = g.r1 * g.lt1 + g.r2 * g.lt2;
      double dp = g.p * (w / a - g.ln_s / (a * a));
      return -dp + (g.lt1 + g.lt2) - g.ln_s / (a * a) + (1.0 / a - 2.0) * w +
             (dp + 1.0) / (g.p + a - 1.0);
    }
    default:
      throw validation_error("invalid copula family tag");
  }
}

double conditional_quantile(const CopulaSpec& spec, double t, double u1) {
  if (!(t > 0.0 && t < 1.0 && u1 > 0.0 && u1 < 1.0))
    throw boundary_error("conditional_quantile requires t, u1 in (0, 1)");
  double a = spec.alpha;
  switch (spec.family) {
    case CopulaFamily::product:
      return t;
    case CopulaFamily::gaussian: {
      if (a == 0.0) return t;
      return norm_cdf(a * norm_quantile(u1) + std::sqrt(1.0 - a * a) * norm_quantile(t));
    }
    case CopulaFamily::fgm: {
      double b = a * (1.0 - 2.0 * u1);
      return 2.0 * t / ((1.0 + b) + std::sqrt((1.0 + b) * (1.0 + b) - 4.0 * b * t));
    }
    case CopulaFamily::clayton: {
      double a1 = -a * std::log(u1);
      double ct = -(a / (a + 1.0)) * std::log(t);
      double ln_u2a = a1 + std::log(std::expm1(ct) + std::exp(-a1));
      return std::exp(-ln_u2a / a);
    }
    case CopulaFamily::frank:
      if (a > 0.0) return frank_cond_quantile_pos(a, t, u1);
      return frank_cond_quantile_pos(-a, t, 1.0 - u1);
    case CopulaFamily::gumbel: {
      // Newton on z = S^(1/alpha): z + (a-1) ln z = x + (a-1) ln x - ln t.
      double x = -std::log(u1);
      double con = std::log(t) - x - (a - 1.0) * std::log(x);
      double z = x * std::pow(2.0, 1.0 / a);
      for (int it = 0; it < 100; ++it) {
        double g = z + (a - 1.0) * std::log(z) + con;
        double gp = 1.0 + (a - 1.0) / z;
        double z_next = z - g / gp;
        if (!(z_next > x)) z_next = 0.5 * (z + x);
        if (std::fabs(z_next - z) <= 1e-14 * z) {
          z = z_next;
          break;
        }
        z = z_next;
      }
      double lx = std::log(x), lz = std::log(z);
      double y = std::exp((a * lz + std::log1p(-std::exp(a * (lx - lz)))) / a);
      return std::exp(-y);
    }
  }
  throw validation_error("invalid copula family tag");
}

double tau_from_alpha(const CopulaSpec& spec) {
  double a = spec.alpha;
  switch (spec.family) {
    case CopulaFamily::product:
      return 0.0;
    case CopulaFamily::gaussian:
      return 2.0 * std::asin(a) / 3.14159265358979323846;
    case CopulaFamily::fgm:
      return 2.0 * a / 9.0;
    case CopulaFamily::clayton:
      return a / (a + 2.0);
    case CopulaFamily::gumbel:
      return (a - 1.0) / a;
    case CopulaFamily::frank: {
      // tau = 1 - (4/a)(1 - D1(a)), D1(a) = (1/a) int_0^a t/(e^t - 1) dt.
      // The integrand's t = 0 singularity is removable (value 1).
      auto integrand = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
      double d1 = integrate_adaptive(integrand, 0.0, a, 1e-12) / a;
      return 1.0 - (4.0 / a) * (1.0 - d1);
    }
  }
  throw validation_error("invalid copula family tag");
}

std::pair<double, double> tau_range(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::product: return {0.0, 0.0};
    case CopulaFamily::gaussian: return {-1.0, 1.0};
    case CopulaFamily::fgm: return {-2.0 / 9.0, 2.0 / 9.0};
    case CopulaFamily::clayton: return {0.0, 1.0};
    case CopulaFamily::gumbel: return {0.0, 1.0};
    case CopulaFamily::frank: return {-1.0, 1.0};
  }
  throw validation_error("invalid copula family tag");
}

CopulaSpec alpha_from_tau(CopulaFamily family, double tau) {
  if (!std::isfinite(tau) || std::fabs(tau) > 1.0)
    throw attainability_error("tau must lie in [-1, 1]");
  const double pi = 3.14159265358979323846;
  switch (family) {
    case CopulaFamily::product:
      if (tau != 0.0)
        throw attainability_error("product copula attains only tau = 0");
      return CopulaSpec::product();
    case CopulaFamily::gaussian:
      if (!(std::fabs(tau) < 1.0))
        throw attainability_error("gaussian copula attains tau in (-1, 1)");
      return CopulaSpec::make(family, std::sin(pi * tau / 2.0));
    case CopulaFamily::fgm:
      if (std::fabs(tau) > 2.0 / 9.0)
        throw attainability_error("fgm copula attains |tau| <= 2/9");
      return CopulaSpec::make(family, 4.5 * tau);
    case CopulaFamily::clayton:
      if (!(tau > 0.0 && tau < 1.0))
        throw attainability_error("clayton copula attains tau in (0, 1)");
      return CopulaSpec::make(family, 2.0 * tau / (1.0 - tau));
    case CopulaFamily::gumbel:
      if (!(tau >= 0.0 && tau < 1.0))
        throw attainability_error("gumbel copula attains tau in [0, 1)");
      return CopulaSpec::make(family, 1.0 / (1.0 - tau));
    case CopulaFamily::frank: {
      if (tau == 0.0 || !(std::fabs(tau) < 1.0))
        throw attainability_error("frank copula attains tau in (-1, 1) excluding 0");
      // tau is odd in alpha; bracket on the positive side and bisect.
      double target = std::fabs(tau);
      auto tau_of = [](double a) {
        return tau_from_alpha(CopulaSpec{CopulaFamily::frank, a});
      };
      double lo = 1e-9, hi = 1.0;
      while (tau_of(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw attainability_error("frank tau too close to 1");
      }
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double tm = tau_of(mid);
        if (std::fabs(tm - target) <= 1e-10 && (hi - lo) <= 1e-9 * std::max(1.0, mid)) {
          lo = hi = mid;
          break;
        }
        (tm < target ? lo : hi) = mid;
      }
      double a = 0.5 * (lo + hi);
      return CopulaSpec::make(family, tau < 0.0 ? -a : a);
    }
  }
  throw validation_error("invalid copula family tag");
}

}  // namespace copdes
