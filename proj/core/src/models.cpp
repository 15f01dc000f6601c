#include "copdes/models.hpp"

#include <cmath>

#include "copdes/errors.hpp"

namespace copdes {

TrendFunction TrendFunction::polynomial(std::vector<unsigned> powers) {
  if (powers.empty()) throw validation_error("trend needs at least one basis function");
  return TrendFunction{std::move(powers)};
}

double TrendFunction::eval(double x, const Eigen::VectorXd& beta) const {
  if (beta.size() != dimension())
    throw validation_error("trend coefficient count does not match basis size");
  double value = 0.0;
  for (int j = 0; j < dimension(); ++j) value += beta[j] * std::pow(x, powers[j]);
  return value;
}

Eigen::VectorXd TrendFunction::gradient(double x) const {
  Eigen::VectorXd g(dimension());
  for (int j = 0; j < dimension(); ++j) g[j] = std::pow(x, powers[j]);
  return g;
}

double eval_trend(const TrendFunction& trend, double x, const Eigen::VectorXd& beta) {
  return trend.eval(x, beta);
}

Eigen::VectorXd trend_gradient(const TrendFunction& trend, double x) {
  return trend.gradient(x);
}

LocalParameters GaussianMarginProblem::default_params() const {
  LocalParameters p;
  p.beta = Eigen::VectorXd::Zero(k());
  if (estimate_alpha) p.alpha = copula.alpha;
  return p;
}

LocalParameters BinaryLogisticProblem::default_params() const {
  LocalParameters p;
  p.beta.resize(4);
  p.beta << beta1[0], beta1[1], beta2[0], beta2[1];
  if (estimate_alpha) p.alpha = copula.alpha;
  return p;
}

int problem_dim(const Problem& problem) {
  return std::visit([](const auto& p) { return p.dim(); }, problem);
}
double problem_lower(const Problem& problem) {
  return std::visit([](const auto& p) { return p.lower; }, problem);
}
double problem_upper(const Problem& problem) {
  return std::visit([](const auto& p) { return p.upper; }, problem);
}
LocalParameters problem_default_params(const Problem& problem) {
  return std::visit([](const auto& p) { return p.default_params(); }, problem);
}

CopulaSpec working_copula(const GaussianMarginProblem& problem) {
  return problem.estimate_alpha ? problem.copula : CopulaSpec::product();
}
CopulaSpec working_copula(const BinaryLogisticProblem& problem) {
  return problem.estimate_alpha ? problem.copula : CopulaSpec::product();
}

namespace {
double logistic(double t) {
  // Branch avoids overflow of exp for large |t|.
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}
}  // namespace

double marginal_prob(const BinaryLogisticProblem& problem, double x, int margin_index) {
  if (margin_index != 1 && margin_index != 2)
    throw validation_error("margin_index must be 1 or 2");
  const Eigen::Vector2d& b = margin_index == 1 ? problem.beta1 : problem.beta2;
  return logistic(b[0] + b[1] * x);
}

Eigen::VectorXd working_theta(const BinaryLogisticProblem& problem) {
  Eigen::VectorXd theta(problem.dim());
  theta.head(4) << problem.beta1[0], problem.beta1[1], problem.beta2[0], problem.beta2[1];
  if (problem.estimate_alpha) theta[4] = problem.copula.alpha;
  return theta;
}

CellProbabilities cell_probs_at(const BinaryLogisticProblem& problem, double x,
                                const Eigen::VectorXd& theta) {
  if (theta.size() != problem.dim())
    throw validation_error("theta dimension does not match the working model");
  double pi1 = logistic(theta[0] + theta[1] * x);
  double pi2 = logistic(theta[2] + theta[3] * x);
  CopulaSpec spec = problem.estimate_alpha
                        ? CopulaSpec::make(problem.copula.family, theta[4])
                        : CopulaSpec::product();
  double p11 = cdf(spec, pi1, pi2);

  double frechet_lo = std::max(pi1 + pi2 - 1.0, 0.0);
  double frechet_hi = std::min(pi1, pi2);
  if (p11 < frechet_lo - 1e-10 || p11 > frechet_hi + 1e-10)
    throw consistency_error("cell probability p11 violates the Frechet bounds");

  CellProbabilities cells;
  cells.p11 = p11;
  cells.p10 = pi1 - p11;
  cells.p01 = pi2 - p11;
  cells.p00 = 1.0 - pi1 - pi2 + p11;
  for (double* c : {&cells.p11, &cells.p10, &cells.p01, &cells.p00}) {
    if (*c < kCellFloor) {
      *c = kCellFloor;
      cells.clamped = true;
    } else if (*c > 1.0 - kCellFloor) {
      *c = 1.0 - kCellFloor;
      cells.clamped = true;
    }
  }
  return cells;
}

CellProbabilities cell_probs(const BinaryLogisticProblem& problem, double x) {
  // The model's own cells use the problem's copula regardless of whether
  // alpha is estimated; estimation-model collapse happens in the information
  // layer.
  BinaryLogisticProblem full = problem;
  full.estimate_alpha = problem.copula.has_alpha();
  return cell_probs_at(full, x, working_theta(full));
}

}  // namespace copdes
