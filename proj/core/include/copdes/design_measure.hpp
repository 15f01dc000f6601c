#pragma once

#include <vector>

namespace copdes {

// Finite design measure: support points with positive weights summing to 1.
// Construction validates positivity and the weight sum (1e-12); ordering and
// dedup are canonicalize's job.
struct DesignMeasure {
  std::vector<double> points;
  std::vector<double> weights;

  static DesignMeasure make(std::vector<double> points, std::vector<double> weights);
  int size() const { return static_cast<int>(points.size()); }
};

// Sorts the support, merges points within merge_tol_x into their
// weight-averaged location, drops weights below prune_tol_w, renormalizes.
// Throws validation_error if nothing survives pruning.
DesignMeasure canonicalize(const DesignMeasure& design, double merge_tol_x,
                           double prune_tol_w);

}  // namespace copdes
