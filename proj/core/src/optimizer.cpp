#include "copdes/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "copdes/errors.hpp"

namespace copdes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Working state: support with the elementary matrices kept alongside.
struct Support {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<InfoMatrix> m;

  DesignMeasure measure() const { return DesignMeasure{x, w}; }
  int size() const { return static_cast<int>(x.size()); }
};

Support from_measure(const DesignMeasure& design, const FimEvaluator& fim) {
  Support s;
  s.x = design.points;
  s.w = design.weights;
  s.m.reserve(s.x.size());
  for (double xi : s.x) s.m.push_back(fim(xi));
  return s;
}

InfoMatrix support_fim(const Support& s) {
  InfoMatrix m = InfoMatrix::Zero(s.m[0].rows(), s.m[0].cols());
  for (int i = 0; i < s.size(); ++i) m += s.w[i] * s.m[i];
  return m;
}

Eigen::MatrixXd inverse_of(const InfoMatrix& m) {
  return m.ldlt().solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

double trace_dot(const Eigen::MatrixXd& m_inv, const InfoMatrix& m) {
  return m_inv.cwiseProduct(m).sum();
}

// Sort + merge within tol (weight-averaged locations) + prune + renormalize,
// refreshing elementary matrices of merged points.
void canonicalize_support(Support& s, const FimEvaluator& fim, double merge_tol,
                          double prune_tol) {
  DesignMeasure canon = canonicalize(s.measure(), merge_tol, prune_tol);
  Support next;
  next.x = canon.points;
  next.w = canon.weights;
  next.m.reserve(next.x.size());
  for (size_t i = 0; i < next.x.size(); ++i) {
    // Reuse the matrix when the point survived unchanged.
    auto it = std::find(s.x.begin(), s.x.end(), next.x[i]);
    if (it != s.x.end())
      next.m.push_back(s.m[it - s.x.begin()]);
    else
      next.m.push_back(fim(next.x[i]));
  }
  s = std::move(next);
}

void refine_weights_inplace(Support& s, int iters, int p) {
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd m_inv = inverse_of(support_fim(s));
    double shift = 0.0, sum = 0.0;
    for (int i = 0; i < s.size(); ++i) {
      double d = trace_dot(m_inv, s.m[i]);
      double next = s.w[i] * d / p;
      shift = std::max(shift, std::fabs(next - s.w[i]));
      s.w[i] = next;
      sum += next;
    }
    for (double& w : s.w) w /= sum;
    if (shift < 1e-15) break;
  }
}

// Merge adjacent support pairs, and drop low-weight satellites, when the
// criterion does not decrease after a short reweighting; collapses the
// grid-cell clusters Fedorov-Wynn leaves behind without ever losing
// criterion value. A genuinely needed point fails the guard and stays.
void consolidate(Support& s, const FimEvaluator& fim, double radius, int p) {
  auto accept = [&](Support& trial, double base) {
    refine_weights_inplace(trial, 30, p);
    return log_det(support_fim(trial)) >= base - 1e-11 * (1.0 + std::fabs(base));
  };
  bool changed = true;
  while (changed && s.size() > 1) {
    changed = false;
    double base = log_det(support_fim(s));

    std::vector<int> order;
    for (int i = 0; i + 1 < s.size(); ++i)
      if (s.x[i + 1] - s.x[i] <= radius) order.push_back(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return s.x[a + 1] - s.x[a] < s.x[b + 1] - s.x[b]; });
    for (int i : order) {
      Support trial = s;
      double wm = trial.w[i] + trial.w[i + 1];
      double xm = (trial.x[i] * trial.w[i] + trial.x[i + 1] * trial.w[i + 1]) / wm;
      trial.x[i] = xm;
      trial.w[i] = wm;
      trial.m[i] = fim(xm);
      trial.x.erase(trial.x.begin() + i + 1);
      trial.w.erase(trial.w.begin() + i + 1);
      trial.m.erase(trial.m.begin() + i + 1);
      if (accept(trial, base)) {
        s = std::move(trial);
        changed = true;
        break;
      }
    }
    if (changed) continue;

    for (int i = 0; i < s.size(); ++i) {
      if (s.w[i] >= 0.02) continue;
      Support trial = s;
      trial.x.erase(trial.x.begin() + i);
      trial.w.erase(trial.w.begin() + i);
      trial.m.erase(trial.m.begin() + i);
      double sum = 0.0;
      for (double w : trial.w) sum += w;
      for (double& w : trial.w) w /= sum;
      if (accept(trial, base)) {
        s = std::move(trial);
        changed = true;
        break;
      }
    }
  }
}

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-11 * std::max(1.0, std::fabs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Move each support point to the sensitivity maximum of its basin (window to
// the neighbor midpoints), keeping moves only when the criterion does not
// decrease.
void polish_support(Support& s, const FimEvaluator& fim) {
  Eigen::MatrixXd m_inv = inverse_of(support_fim(s));
  double base = log_det(support_fim(s));
  for (int i = 0; i < s.size(); ++i) {
    double lo = i == 0 ? fim.lower() : 0.5 * (s.x[i - 1] + s.x[i]);
    double hi = i == s.size() - 1 ? fim.upper() : 0.5 * (s.x[i] + s.x[i + 1]);
    auto d_of = [&](double t) { return trace_dot(m_inv, fim(t)); };
    double candidate = golden_max(d_of, lo, hi);
    if (d_of(candidate) <= d_of(s.x[i])) continue;
    InfoMatrix m_new = fim(candidate);
    Support trial = s;
    trial.x[i] = candidate;
    trial.m[i] = m_new;
    double ld = log_det(support_fim(trial));
    if (ld >= base) {
      s = std::move(trial);
      base = ld;
    }
  }
}

}  // namespace

DesignMeasure refine_weights(const DesignMeasure& design, const FimEvaluator& fim,
                             int iters) {
  if (design.size() == 1)  // the only weight is pinned at 1
    return DesignMeasure::make(design.points, {1.0});
  Support s = from_measure(design, fim);
  if (log_det(support_fim(s)) == -kInf)
    throw singular_error("refine_weights requires a nonsingular design");
  refine_weights_inplace(s, iters, fim.dim());
  return s.measure();
}

OptimizeResult fedorov_wynn(const Problem& problem, const LocalParameters& params,
                            const OptimizerConfig& config) {
  const int p = problem_dim(problem);
  if (config.grid_size < p + 1)
    throw validation_error("grid_size must be at least k+l+1");
  if (!(config.eps_bound > 0.0)) throw validation_error("eps_bound must be positive");

  QuadratureRule quad = QuadratureRule::make(config.quad_order);
  FimEvaluator fim(problem, params, quad);
  const double a = fim.lower(), b = fim.upper();
  const double merge_tol =
      config.merge_tol_x > 0.0 ? config.merge_tol_x : 1e-3 * (b - a);
  const double spacing = (b - a) / (config.grid_size - 1);
  const double cluster_tol = std::max(merge_tol, 3.0 * spacing);

  // Candidate grid with cached elementary matrices.
  std::vector<double> xs(config.grid_size);
  std::vector<InfoMatrix> grid_m;
  grid_m.reserve(config.grid_size);
  for (int i = 0; i < config.grid_size; ++i) {
    xs[i] = a + spacing * i;
    grid_m.push_back(fim(xs[i]));
  }

  // Equal weights on equispaced points; widen deterministically if singular.
  Support s;
  for (int n : {p + 1, 2 * p + 1, std::min(4 * p + 3, config.grid_size)}) {
    Support trial;
    for (int i = 0; i < n; ++i) {
      trial.x.push_back(a + (b - a) * static_cast<double>(i) / (n - 1));
      trial.w.push_back(1.0 / n);
      trial.m.push_back(fim(trial.x.back()));
    }
    if (log_det(support_fim(trial)) > -kInf) {
      s = std::move(trial);
      break;
    }
  }
  if (s.size() == 0)
    throw singular_error("no nonsingular equispaced initialization found");

  OptimizeResult result;
  int iter = 0;
  bool converged = false;
  double bound = p * (1.0 + config.eps_bound);

  auto grid_max = [&](const Eigen::MatrixXd& m_inv, int* argmax) {
    double best = -kInf;
    int best_i = 0;
    for (int g = 0; g < config.grid_size; ++g) {
      double d = trace_dot(m_inv, grid_m[g]);
      if (d > best) {
        best = d;
        best_i = g;
      }
    }
    if (argmax) *argmax = best_i;
    return best;
  };

  for (int round = 0; round < config.outer_rounds && !converged; ++round) {
    // Vertex additions.
    while (iter < config.max_iters) {
      InfoMatrix m = support_fim(s);
      double criterion = log_det(m);
      Eigen::MatrixXd m_inv = inverse_of(m);
      int g_star = 0;
      double d_max = grid_max(m_inv, &g_star);
      result.trace.entries.push_back({iter, criterion, d_max, s.size()});
      ++iter;
      if (d_max <= bound) break;

      double gamma = (d_max - p) / (p * (d_max - 1.0));
      // The exact step undershoots the line maximum for rank > 1 elementary
      // matrices, so ascent holds; halving guards numerical corner cases.
      for (int h = 0; h < 40; ++h) {
        Support trial = s;
        for (double& w : trial.w) w *= 1.0 - gamma;
        trial.x.push_back(xs[g_star]);
        trial.w.push_back(gamma);
        trial.m.push_back(grid_m[g_star]);
        // Vertices land on neighboring grid cells around each sensitivity
        // peak while the design evolves; merging at a few cells' radius
        // keeps the working support near its Caratheodory size. Positions
        // are corrected by the polish stage.
        canonicalize_support(trial, fim, cluster_tol, config.prune_tol_w);
        if (log_det(support_fim(trial)) >=
            criterion - 1e-11 * (1.0 + std::fabs(criterion))) {
          s = std::move(trial);
          break;
        }
        gamma *= 0.5;
      }
      if (s.size() > p * (p + 1) / 2) consolidate(s, fim, cluster_tol, p);
    }

    refine_weights_inplace(s, config.refine_iters, p);
    canonicalize_support(s, fim, merge_tol, config.prune_tol_w);
    consolidate(s, fim, 8.0 * spacing, p);
    polish_support(s, fim);
    canonicalize_support(s, fim, merge_tol, config.prune_tol_w);
    refine_weights_inplace(s, config.refine_iters, p);

    InfoMatrix m = support_fim(s);
    Eigen::MatrixXd m_inv = inverse_of(m);
    double gap = grid_max(m_inv, nullptr);
    for (const InfoMatrix& mi : s.m) gap = std::max(gap, trace_dot(m_inv, mi));
    result.trace.entries.push_back({iter, log_det(m), gap, s.size()});
    converged = gap <= bound;
    if (iter >= config.max_iters) break;
  }

  result.design = s.measure();
  result.converged = converged;
  result.report = certify(result.design, fim, config.certify_grid, config.tol_cert);
  return result;
}

}  // namespace copdes
