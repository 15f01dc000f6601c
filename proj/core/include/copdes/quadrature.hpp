#pragma once

#include <functional>
#include <vector>

namespace copdes {

// Gauss-Legendre nodes and weights on (0, 1). Weights sum to 1.
struct GaussLegendre {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  static GaussLegendre make(int order);
};

// Tensor Gauss-Legendre rule on (0,1)^2, the workhorse for the information
// integrals. Nodes are the 1-D rule's in both coordinates.
struct QuadratureRule {
  GaussLegendre line;

  int order() const { return line.order; }
  static QuadratureRule make(int order);
};

// Adaptive Gauss-Kronrod (G7, K15) integration of f on [a, b] to the given
// absolute tolerance. Bisects until the embedded error estimate passes.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol);

}  // namespace copdes
