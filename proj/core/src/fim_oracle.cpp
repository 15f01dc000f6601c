#include <cmath>

#include "copdes/errors.hpp"
#include "copdes/fim.hpp"

namespace copdes {

// Validation-only route to the binary information: E[grad log p grad log p^T]
// summed over the four outcomes, with gradients by central finite differences
// of the cell log probabilities in theta. Shares nothing with the Jacobian
// assembly in elementary_fim_binary beyond the cell probabilities themselves.
InfoMatrix binary_fim_oracle(const BinaryLogisticProblem& problem, double x,
                             const LocalParameters& params) {
  const int p = problem.dim();
  if (params.dim() != p)
    throw validation_error("localization dimension does not match the problem");

  Eigen::VectorXd theta(p);
  theta.head(4) = params.beta;
  if (problem.estimate_alpha) theta[4] = *params.alpha;

  auto log_cells = [&](const Eigen::VectorXd& th) {
    CellProbabilities c = cell_probs_at(problem, x, th);
    return Eigen::Vector4d(std::log(c.p11), std::log(c.p10), std::log(c.p01),
                           std::log(c.p00));
  };

  CellProbabilities cells = cell_probs_at(problem, x, theta);
  if (cells.clamped)
    throw degenerate_info_error("degenerate outcome cell in binary information", x);
  Eigen::Vector4d prob(cells.p11, cells.p10, cells.p01, cells.p00);

  Eigen::MatrixXd grad(4, p);
  for (int j = 0; j < p; ++j) {
    double h = 1e-6 * std::max(1.0, std::fabs(theta[j]));
    Eigen::VectorXd up = theta, dn = theta;
    up[j] += h;
    dn[j] -= h;
    grad.col(j) = (log_cells(up) - log_cells(dn)) / (2.0 * h);
  }

  InfoMatrix m = InfoMatrix::Zero(p, p);
  for (int outcome = 0; outcome < 4; ++outcome) {
    Eigen::VectorXd g = grad.row(outcome).transpose();
    m += prob[outcome] * g * g.transpose();
  }
  return m;
}

}  // namespace copdes
