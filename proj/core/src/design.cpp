#include "copdes/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "copdes/errors.hpp"

namespace copdes {

DesignMeasure DesignMeasure::make(std::vector<double> points, std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size())
    throw validation_error("design needs matching nonempty point and weight arrays");
  double sum = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw validation_error("design point not finite");
    if (!(weights[i] > 0.0)) throw validation_error("design weights must be positive");
    sum += weights[i];
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw validation_error("design weights must sum to 1 (within 1e-12)");
  return DesignMeasure{std::move(points), std::move(weights)};
}

DesignMeasure canonicalize(const DesignMeasure& design, double merge_tol_x,
                           double prune_tol_w) {
  std::vector<int> order(design.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return design.points[a] < design.points[b]; });

  std::vector<double> pts, wts;
  for (int idx : order) {
    double x = design.points[idx];
    double w = design.weights[idx];
    if (!pts.empty() && x - pts.back() <= merge_tol_x) {
      double w0 = wts.back();
      pts.back() = (pts.back() * w0 + x * w) / (w0 + w);
      wts.back() = w0 + w;
    } else {
      pts.push_back(x);
      wts.push_back(w);
    }
  }

  std::vector<double> kept_p, kept_w;
  double sum = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (wts[i] >= prune_tol_w) {
      kept_p.push_back(pts[i]);
      kept_w.push_back(wts[i]);
      sum += wts[i];
    }
  }
  if (kept_p.empty())
    throw validation_error("canonicalize pruned every support point");
  for (double& w : kept_w) w /= sum;
  return DesignMeasure{std::move(kept_p), std::move(kept_w)};
}

SensitivityEvaluator::SensitivityEvaluator(const DesignMeasure& design,
                                           const FimEvaluator& fim)
    : fim_(fim) {
  InfoMatrix m = design_fim(design, fim);
  log_det_ = log_det(m);
  if (log_det_ == -std::numeric_limits<double>::infinity())
    throw singular_error("design information matrix is singular");
  m_inverse_ = m.ldlt().solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

double SensitivityEvaluator::at_matrix(const InfoMatrix& m) const {
  // Both matrices are symmetric, so tr(M^-1 m) is an elementwise dot.
  return m_inverse_.cwiseProduct(m).sum();
}

double SensitivityEvaluator::operator()(double x) const { return at_matrix(fim_(x)); }

double sensitivity(double x, const DesignMeasure& design, const FimEvaluator& fim) {
  return SensitivityEvaluator(design, fim)(x);
}

CertificationReport certify(const DesignMeasure& design, const FimEvaluator& fim,
                            int grid_size, double tol_cert) {
  if (grid_size < 2) throw validation_error("certification grid needs >= 2 points");
  CertificationReport report;
  report.bound = fim.dim();

  std::vector<double> xs;
  xs.reserve(grid_size + design.size());
  double a = fim.lower(), b = fim.upper();
  for (int i = 0; i < grid_size; ++i)
    xs.push_back(a + (b - a) * static_cast<double>(i) / (grid_size - 1));
  xs.insert(xs.end(), design.points.begin(), design.points.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  try {
    SensitivityEvaluator d(design, fim);
    report.max_sensitivity = -std::numeric_limits<double>::infinity();
    report.profile.reserve(xs.size());
    for (double x : xs) {
      double v = d(x);
      report.profile.emplace_back(x, v);
      if (v > report.max_sensitivity) {
        report.max_sensitivity = v;
        report.argmax_x = x;
      }
    }
    report.certified = report.max_sensitivity <= report.bound * (1.0 + tol_cert);
    if (!report.certified) report.reason = "sensitivity bound exceeded";
  } catch (const singular_error& e) {
    report.certified = false;
    report.reason = e.what();
  }
  return report;
}

double d_efficiency(const DesignMeasure& xi, const DesignMeasure& xi_prime,
                    const FimEvaluator& fim) {
  double ld_ref = log_det(design_fim(xi_prime, fim));
  if (ld_ref == -std::numeric_limits<double>::infinity())
    throw singular_error("reference design is singular under this model");
  double ld = log_det(design_fim(xi, fim));
  if (ld == -std::numeric_limits<double>::infinity()) return 0.0;
  return std::exp((ld - ld_ref) / fim.dim());
}

double gateaux_d(const InfoMatrix& m1, const InfoMatrix& m2) {
  if (m1.rows() != m2.rows() || m1.cols() != m2.cols())
    throw validation_error("matrix dimensions must agree");
  if (log_det(m1) == -std::numeric_limits<double>::infinity())
    throw singular_error("directional derivative at a singular matrix");
  return m1.ldlt().solve(m2).trace();
}

double frechet_d(const InfoMatrix& m1, const InfoMatrix& m2) {
  return gateaux_d(m1, m2) - static_cast<double>(m1.rows());
}

}  // namespace copdes
