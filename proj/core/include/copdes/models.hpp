#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "copdes/copula.hpp"

namespace copdes {

// Polynomial trend eta(x, beta) = sum_j beta_j x^powers[j]. The built-in
// bases are exact integer powers; the gradient in beta is the basis vector
// itself, independent of beta.
struct TrendFunction {
  std::vector<unsigned> powers;

  static TrendFunction polynomial(std::vector<unsigned> powers);
  int dimension() const { return static_cast<int>(powers.size()); }
  double eval(double x, const Eigen::VectorXd& beta) const;
  Eigen::VectorXd gradient(double x) const;
};

// Localization vector (beta, alpha): beta of length k, alpha present exactly
// when the copula parameter is estimated (l = 1) and absent when the
// dependence is ignored (l = 0).
struct LocalParameters {
  Eigen::VectorXd beta;
  std::optional<double> alpha;

  int k() const { return static_cast<int>(beta.size()); }
  int l() const { return alpha.has_value() ? 1 : 0; }
  int dim() const { return k() + l(); }
};

// Two unit-variance Gaussian margins around polynomial trends, joined by a
// copula on a compact design interval.
struct GaussianMarginProblem {
  TrendFunction trend1;
  TrendFunction trend2;
  CopulaSpec copula;
  double lower = 0.0;
  double upper = 1.0;
  bool estimate_alpha = false;

  int k() const { return trend1.dimension() + trend2.dimension(); }
  int l() const { return estimate_alpha ? 1 : 0; }
  int dim() const { return k() + l(); }
  // Linear trends make the information beta-free; the default localization
  // carries zero betas plus the problem's copula parameter.
  LocalParameters default_params() const;
};

// Two logistic margins log(pi/(1-pi)) = b0 + b1 x joined by a copula.
struct BinaryLogisticProblem {
  Eigen::Vector2d beta1;
  Eigen::Vector2d beta2;
  CopulaSpec copula;
  double lower = 0.0;
  double upper = 10.0;
  bool estimate_alpha = false;

  int k() const { return 4; }
  int l() const { return estimate_alpha ? 1 : 0; }
  int dim() const { return k() + l(); }
  LocalParameters default_params() const;
};

using Problem = std::variant<GaussianMarginProblem, BinaryLogisticProblem>;

int problem_dim(const Problem& problem);
double problem_lower(const Problem& problem);
double problem_upper(const Problem& problem);
LocalParameters problem_default_params(const Problem& problem);

// The model the experimenter estimates under: the problem's copula when
// alpha is estimated, independence when the dependence is ignored.
CopulaSpec working_copula(const GaussianMarginProblem& problem);
CopulaSpec working_copula(const BinaryLogisticProblem& problem);

// eta_i(x, beta) for the Gaussian-margin problem; beta stacks the two trends'
// coefficients (trend1 first).
double eval_trend(const TrendFunction& trend, double x, const Eigen::VectorXd& beta);
Eigen::VectorXd trend_gradient(const TrendFunction& trend, double x);

// pi_i(x) for the binary problem, in (0, 1) for any finite x.
double marginal_prob(const BinaryLogisticProblem& problem, double x, int margin_index);

// Joint outcome probabilities p11 = C(pi1, pi2), p10 = pi1 - p11,
// p01 = pi2 - p11, p00 = 1 - pi1 - pi2 + p11. Cells are clamped to
// [eps_p, 1 - eps_p], eps_p = 1e-12, before any log is taken; `clamped`
// records whether the floor was hit. Violating the Frechet bounds by more
// than 1e-10 raises consistency_error (it would indicate a copula bug).
struct CellProbabilities {
  double p11, p10, p01, p00;
  bool clamped = false;
};

inline constexpr double kCellFloor = 1e-12;

CellProbabilities cell_probs(const BinaryLogisticProblem& problem, double x);

// Same cells at an explicit parameter vector theta = (b10, b11, b20, b21
// [, alpha]) under the problem's working model; used by the information
// code and the finite-difference oracle.
CellProbabilities cell_probs_at(const BinaryLogisticProblem& problem, double x,
                                const Eigen::VectorXd& theta);

// theta of the problem's working model, in the fixed ordering above.
Eigen::VectorXd working_theta(const BinaryLogisticProblem& problem);

}  // namespace copdes
