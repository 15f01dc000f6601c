#pragma once

#include <optional>
#include <string>
#include <vector>

#include "copdes/optimizer.hpp"

namespace copdes {

// One row of an efficiency-loss study. `status` is "ok", "n.d." when the
// family cannot attain the row's tau, or an error description; loss is
// present only for "ok" rows.
struct LossRow {
  CopulaFamily family;
  double tau = 0.0;
  std::optional<double> alpha;
  std::optional<double> loss_percent;
  std::string status;
};

struct LossTable {
  std::vector<LossRow> rows;
};

// Loss in D-efficiency from using `benchmark` (typically the optimal design
// of the dependence-ignoring model) instead of the full-model optimum:
// per row, alpha = alpha_from_tau, xi_full = fedorov_wynn under the
// (k+l)-parameter model, loss = 100 (1 - d_efficiency(benchmark, xi_full)),
// everything evaluated under the full model. Row-level failures land in
// `status` instead of propagating.
LossTable ignorance_loss_table(const Problem& problem_template,
                               const std::vector<std::pair<CopulaFamily, double>>& rows,
                               const DesignMeasure& benchmark,
                               const OptimizerConfig& config);

struct MisspecCell {
  double tau = 0.0;
  CopulaFamily true_family;
  CopulaFamily assumed_family;
  std::optional<double> loss_percent;
  std::string status;
};

struct MisspecTable {
  std::vector<MisspecCell> cells;
};

// Copula-misspecification study: for each tau and ordered pair (true T,
// assumed A), optimize under each family's full model and report
// 100 (1 - d_efficiency(xi_A, xi_T)) with both informations evaluated under
// the true family's full model. The true == assumed diagonal is exactly 0.
MisspecTable misspecification_table(const Problem& problem_template,
                                    const std::vector<double>& taus,
                                    const std::vector<std::pair<CopulaFamily, CopulaFamily>>& pairs,
                                    const OptimizerConfig& config);

}  // namespace copdes
