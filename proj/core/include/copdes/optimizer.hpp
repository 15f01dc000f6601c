#pragma once

#include <vector>

#include "copdes/design.hpp"
#include "copdes/fim.hpp"
#include "copdes/models.hpp"

namespace copdes {

struct OptimizerConfig {
  int grid_size = 1001;      // candidate discretization of [a, b]
  int max_iters = 5000;      // total Fedorov-Wynn additions
  double eps_bound = 1e-4;   // stop once max d <= (k+l)(1 + eps_bound)
  int refine_iters = 400;    // multiplicative weight iterations per round
  double merge_tol_x = -1.0; // < 0 means the default 1e-3 (b - a)
  double prune_tol_w = 1e-4;
  int certify_grid = 2001;
  double tol_cert = 1e-3;
  int quad_order = 64;
  int outer_rounds = 40;     // FW / refine / polish cycles
};

struct TraceEntry {
  int iteration;
  double criterion;        // log det M(xi)
  double max_sensitivity;  // over the candidate grid
  int support_size;
};

struct OptimizationTrace {
  std::vector<TraceEntry> entries;
};

struct OptimizeResult {
  DesignMeasure design;
  OptimizationTrace trace;
  CertificationReport report;
  bool converged = false;  // sensitivity gap met within the iteration budget
};

// Fedorov-Wynn D-optimal search: vertex additions with the exact D step
// gamma = (d - p)/(p (d - 1)), canonicalization each iteration, then
// multiplicative weight refinement, criterion-guarded merging of adjacent
// support points, and golden-section polishing of support locations off the
// grid. Deterministic: no randomness anywhere, identical inputs give
// identical output.
OptimizeResult fedorov_wynn(const Problem& problem, const LocalParameters& params,
                            const OptimizerConfig& config);

// Multiplicative reweighting on a fixed support: w_i <- w_i d(x_i, xi) / p,
// renormalized; the D criterion is nondecreasing every step.
DesignMeasure refine_weights(const DesignMeasure& design, const FimEvaluator& fim,
                             int iters);

}  // namespace copdes
