#include "copdes/tables.hpp"

#include <map>

#include "copdes/errors.hpp"

namespace copdes {

namespace {

// Template with the copula replaced and alpha estimated.
Problem full_model(const Problem& tmpl, const CopulaSpec& spec) {
  Problem out = tmpl;
  std::visit(
      [&](auto& p) {
        p.copula = spec;
        p.estimate_alpha = true;
      },
      out);
  return out;
}

}  // namespace

LossTable ignorance_loss_table(const Problem& problem_template,
                               const std::vector<std::pair<CopulaFamily, double>>& rows,
                               const DesignMeasure& benchmark,
                               const OptimizerConfig& config) {
  LossTable table;
  QuadratureRule quad = QuadratureRule::make(config.quad_order);
  for (const auto& [family, tau] : rows) {
    LossRow row;
    row.family = family;
    row.tau = tau;
    try {
      CopulaSpec spec = alpha_from_tau(family, tau);
      row.alpha = spec.alpha;
      Problem full = full_model(problem_template, spec);
      OptimizeResult opt =
          fedorov_wynn(full, problem_default_params(full), config);
      FimEvaluator fim(full, problem_default_params(full), quad);
      row.loss_percent = 100.0 * (1.0 - d_efficiency(benchmark, opt.design, fim));
      row.status = opt.report.certified ? "ok" : "ok (uncertified optimum)";
    } catch (const attainability_error&) {
      row.status = "n.d.";
    } catch (const error& e) {
      row.status = std::string("error: ") + e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

MisspecTable misspecification_table(
    const Problem& problem_template, const std::vector<double>& taus,
    const std::vector<std::pair<CopulaFamily, CopulaFamily>>& pairs,
    const OptimizerConfig& config) {
  MisspecTable table;
  QuadratureRule quad = QuadratureRule::make(config.quad_order);
  for (double tau : taus) {
    // One optimization per family at this tau, shared across the pairs.
    std::map<CopulaFamily, DesignMeasure> optima;
    std::map<CopulaFamily, std::string> failures;
    for (const auto& [true_family, assumed_family] : pairs) {
      for (CopulaFamily family : {true_family, assumed_family}) {
        if (optima.count(family) || failures.count(family)) continue;
        try {
          CopulaSpec spec = alpha_from_tau(family, tau);
          Problem full = full_model(problem_template, spec);
          optima.emplace(
              family,
              fedorov_wynn(full, problem_default_params(full), config).design);
        } catch (const attainability_error&) {
          failures.emplace(family, "n.d.");
        } catch (const error& e) {
          failures.emplace(family, std::string("error: ") + e.what());
        }
      }
    }
    for (const auto& [true_family, assumed_family] : pairs) {
      MisspecCell cell;
      cell.tau = tau;
      cell.true_family = true_family;
      cell.assumed_family = assumed_family;
      if (failures.count(true_family) || failures.count(assumed_family)) {
        cell.status = failures.count(true_family) ? failures[true_family]
                                                  : failures[assumed_family];
      } else if (true_family == assumed_family) {
        cell.loss_percent = 0.0;
        cell.status = "ok";
      } else {
        try {
          Problem truth =
              full_model(problem_template, alpha_from_tau(true_family, tau));
          FimEvaluator fim(truth, problem_default_params(truth), quad);
          cell.loss_percent =
              100.0 *
              (1.0 - d_efficiency(optima.at(assumed_family), optima.at(true_family), fim));
          cell.status = "ok";
        } catch (const error& e) {
          cell.status = std::string("error: ") + e.what();
        }
      }
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

}  // namespace copdes
