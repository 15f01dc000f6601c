#pragma once

#include <optional>

#include <Eigen/Dense>

#include "copdes/design_measure.hpp"
#include "copdes/models.hpp"
#include "copdes/quadrature.hpp"

namespace copdes {

// Symmetric PSD (k+l) x (k+l) information matrix.
using InfoMatrix = Eigen::MatrixXd;

// The Gaussian-margin model's elementary information factorizes: with
// scores s_beta = g_i(x) * A_i(u), s_alpha = B(u), the whole x-dependence
// sits in the trend gradients, so m(x) is assembled from six scalar moments
//   q11 = E[A1^2], q12 = E[A1 A2], q22 = E[A2^2],
//   q1a = E[A1 B], q2a = E[A2 B], qaa = E[B^2]
// taken under the copula. They are computed once per (copula, alpha).
struct CopulaScoreMoments {
  double q11 = 1.0, q12 = 0.0, q22 = 1.0;
  double q1a = 0.0, q2a = 0.0, qaa = 0.0;
  bool has_alpha = false;
};

// Evaluates the moment integrals with the tensor rule after a Rosenblatt
// change of variables (u2 = conditional quantile), which keeps the rule
// spectrally convergent even for strongly dependent copulas. Throws
// quadrature_error if an integrand sample is non-finite.
CopulaScoreMoments copula_score_moments(const CopulaSpec& copula, bool with_alpha,
                                        const QuadratureRule& quad);

// m(x, beta, alpha) for the Gaussian-margin model, as the expectation of the
// score outer product (information identity). The quadrature order must be
// at least 16.
InfoMatrix elementary_fim_continuous(const GaussianMarginProblem& problem, double x,
                                     const LocalParameters& params,
                                     const QuadratureRule& quad);

// Same matrix assembled from precomputed moments (the optimizer hot path).
InfoMatrix elementary_fim_continuous(const GaussianMarginProblem& problem, double x,
                                     const CopulaScoreMoments& moments);

// m(x, theta) for the binary model: (dp/dtheta)^T (P^-1 + e e^T / p00)
// (dp/dtheta), the Dragalin-Fedorov form, with the Jacobian assembled by the
// chain rule through the copula partials. theta ordering is
// (b10, b11, b20, b21 [, alpha]).
InfoMatrix elementary_fim_binary(const BinaryLogisticProblem& problem, double x,
                                 const LocalParameters& params);

// Reference implementation used by tests only: sums p * grad log p *
// grad log p^T over the four outcomes with central finite-difference
// gradients of the log likelihood in theta. Independent of the Jacobian
// assembly above.
InfoMatrix binary_fim_oracle(const BinaryLogisticProblem& problem, double x,
                             const LocalParameters& params);

// Caches whatever the problem kind needs (score moments for the continuous
// model) and evaluates m(x) cheaply and deterministically.
class FimEvaluator {
public:
  FimEvaluator(Problem problem, LocalParameters params, const QuadratureRule& quad);

  InfoMatrix operator()(double x) const;
  int dim() const { return dim_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  const Problem& problem() const { return problem_; }
  const LocalParameters& params() const { return params_; }

private:
  Problem problem_;
  LocalParameters params_;
  std::optional<CopulaScoreMoments> moments_;
  int dim_;
  double lower_, upper_;
};

// M(xi) = sum_i w_i m(x_i).
InfoMatrix design_fim(const DesignMeasure& design, const FimEvaluator& fim);

// log det via a pivoted LDLT; returns -inf when any pivot drops below
// 1e-13 of the largest (singular or indefinite up to noise).
double log_det(const InfoMatrix& m);

}  // namespace copdes
