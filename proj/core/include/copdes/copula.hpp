#pragma once

#include <string>
#include <string_view>
#include <utility>

namespace copdes {

// The six supported bivariate families. Unknown names are rejected at parse
// time; there is no extension point on purpose.
enum class CopulaFamily { product, gaussian, fgm, clayton, frank, gumbel };

CopulaFamily family_from_string(std::string_view name);
std::string_view to_string(CopulaFamily family);

// A family plus its parameter. The product copula carries no parameter;
// `alpha` is ignored there. Construction validates the family domain:
//   gaussian (-1, 1) open, fgm [-1, 1], clayton (0, inf),
//   frank (-inf, inf) \ {0}, gumbel [1, inf).
struct CopulaSpec {
  CopulaFamily family = CopulaFamily::product;
  double alpha = 0.0;

  static CopulaSpec make(CopulaFamily family, double alpha);
  static CopulaSpec product() { return CopulaSpec{}; }
  bool has_alpha() const { return family != CopulaFamily::product; }
};

// C(u1, u2) on the closed unit square. Boundary values follow the copula
// axioms exactly: C(u, 0) = 0, C(u, 1) = u and symmetrically.
double cdf(const CopulaSpec& spec, double u1, double u2);

// Copula density c(u1, u2) on the open square; boundary points are rejected
// since several families diverge there.
double pdf(const CopulaSpec& spec, double u1, double u2);

// ln c(u1, u2), evaluated in log space for the Archimedean families so large
// parameters do not overflow. Returns -inf where the density vanishes
// (possible for FGM at |alpha| = 1).
double log_pdf(const CopulaSpec& spec, double u1, double u2);

// dC/du1 and dC/du2, the conditional distribution functions; values in [0,1].
double partial_u1(const CopulaSpec& spec, double u1, double u2);
double partial_u2(const CopulaSpec& spec, double u1, double u2);

// dC/dalpha at interior alpha. Closed form for every family (Gaussian uses
// dPhi2/drho = phi2). Rejected for the product copula, which has no
// parameter.
double partial_alpha(const CopulaSpec& spec, double u1, double u2);

// Log-density derivatives, the inputs to the information integrals of the
// Gaussian-margin model: d ln c / du1, du2, dalpha.
double dlogpdf_du1(const CopulaSpec& spec, double u1, double u2);
double dlogpdf_du2(const CopulaSpec& spec, double u1, double u2);
double dlogpdf_dalpha(const CopulaSpec& spec, double u1, double u2);

// Inverse of partial_u1 in its second argument: the u2 with
// partial_u1(u1, u2) = t. Closed form except Gumbel (guarded Newton).
double conditional_quantile(const CopulaSpec& spec, double t, double u1);

// Kendall's tau from the family parameter. Frank evaluates its Debye-type
// integral by adaptive quadrature to 1e-12.
double tau_from_alpha(const CopulaSpec& spec);

// Inverse map: the CopulaSpec whose tau_from_alpha equals `tau`. Closed-form
// inverses everywhere except Frank (bracketed bisection to 1e-10 in tau).
// Throws attainability_error when the family cannot reach the requested tau
// (e.g. FGM beyond |tau| = 2/9, Clayton for tau <= 0).
CopulaSpec alpha_from_tau(CopulaFamily family, double tau);

// Attainable tau range of a family, closed or open per the alpha domain.
std::pair<double, double> tau_range(CopulaFamily family);

}  // namespace copdes
