#pragma once

#include <string>
#include <vector>

#include "copdes/design_measure.hpp"
#include "copdes/fim.hpp"

namespace copdes {

// Equivalence-theorem certificate: the sensitivity maximum over a grid plus
// the design's own support, against the bound k+l.
struct CertificationReport {
  double max_sensitivity = 0.0;
  double argmax_x = 0.0;
  double bound = 0.0;
  bool certified = false;
  std::vector<std::pair<double, double>> profile;  // (x, d(x, xi)), sorted by x
  std::string reason;                              // set when not certified
};

// Factors M(xi) once and evaluates d(x, xi) = tr(M^-1 m(x)) repeatedly.
// Throws singular_error if the design information is singular.
class SensitivityEvaluator {
public:
  SensitivityEvaluator(const DesignMeasure& design, const FimEvaluator& fim);

  double operator()(double x) const;
  double at_matrix(const InfoMatrix& m) const;
  double log_det_value() const { return log_det_; }

private:
  const FimEvaluator& fim_;
  Eigen::MatrixXd m_inverse_;
  double log_det_;
};

// d(x, xi) for a single point.
double sensitivity(double x, const DesignMeasure& design, const FimEvaluator& fim);

// Checks condition (ii) of the equivalence theorem on a uniform grid of
// grid_size points plus the support: certified iff
// max d <= (k+l) (1 + tol_cert). A singular design yields certified = false
// with a reason instead of throwing.
CertificationReport certify(const DesignMeasure& design, const FimEvaluator& fim,
                            int grid_size, double tol_cert);

// (det M(xi) / det M(xi'))^(1/(k+l)). Singular denominator throws
// singular_error; singular numerator returns 0.
double d_efficiency(const DesignMeasure& xi, const DesignMeasure& xi_prime,
                    const FimEvaluator& fim);

// Directional derivatives of log det over the information cone:
// gateaux = tr(M2 M1^-1), frechet = tr(M2 M1^-1) - (k+l).
double gateaux_d(const InfoMatrix& m1, const InfoMatrix& m2);
double frechet_d(const InfoMatrix& m1, const InfoMatrix& m2);

}  // namespace copdes
