#include "copdes/fim.hpp"

#include <cmath>
#include <limits>

#include "copdes/errors.hpp"
#include "copdes/normal.hpp"

namespace copdes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZMax = 8.0;
constexpr double kUClamp = 1e-13;

double clamp_unit(double u) {
  return std::min(1.0 - kUClamp, std::max(kUClamp, u));
}

CopulaSpec effective_copula(const GaussianMarginProblem& problem,
                            const LocalParameters& params) {
  if (!problem.estimate_alpha) return CopulaSpec::product();
  double alpha = params.alpha.value_or(problem.copula.alpha);
  return CopulaSpec::make(problem.copula.family, alpha);
}

}  // namespace

CopulaScoreMoments copula_score_moments(const CopulaSpec& copula, bool with_alpha,
                                        const QuadratureRule& quad) {
  if (with_alpha && !copula.has_alpha())
    throw param_domain_error("cannot estimate the parameter of the product copula");

  CopulaScoreMoments q;
  q.has_alpha = with_alpha;
  q.q11 = q.q12 = q.q22 = q.q1a = q.q2a = q.qaa = 0.0;

  const GaussLegendre& line = quad.line;
  const int n = line.order;
  const bool product = copula.family == CopulaFamily::product;

  // Precompute the outer coordinate per node.
  std::vector<double> z(n), gauss_w(n);
  for (int i = 0; i < n; ++i) {
    z[i] = kZMax * (2.0 * line.nodes[i] - 1.0);
    gauss_w[i] = 2.0 * kZMax * line.weights[i] * norm_pdf(z[i]);
  }

  for (int i = 0; i < n; ++i) {
    double z1 = z[i];
    double u1 = clamp_unit(norm_cdf(z1));
    double phi1 = norm_pdf(z1);
    for (int j = 0; j < n; ++j) {
      double t = clamp_unit(norm_cdf(z[j]));
      double w = gauss_w[i] * gauss_w[j];

      double a1, a2, b = 0.0;
      if (product) {
        a1 = z1;
        a2 = z[j];  // under independence u2 = t, so z2 is the node itself
      } else {
        double u2 = clamp_unit(conditional_quantile(copula, t, u1));
        double z2 = norm_quantile(u2);
        double phi2 = norm_pdf(z2);
        a1 = z1 - phi1 * dlogpdf_du1(copula, u1, u2);
        a2 = z2 - phi2 * dlogpdf_du2(copula, u1, u2);
        if (with_alpha) b = dlogpdf_dalpha(copula, u1, u2);
      }
      if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(b))
        throw quadrature_error("non-finite information integrand sample", u1, t);

      q.q11 += w * a1 * a1;
      q.q12 += w * a1 * a2;
      q.q22 += w * a2 * a2;
      if (with_alpha) {
        q.q1a += w * a1 * b;
        q.q2a += w * a2 * b;
        q.qaa += w * b * b;
      }
    }
  }
  return q;
}

InfoMatrix elementary_fim_continuous(const GaussianMarginProblem& problem, double x,
                                     const CopulaScoreMoments& moments) {
  const int k1 = problem.trend1.dimension();
  const int k2 = problem.trend2.dimension();
  const int p = k1 + k2 + (moments.has_alpha ? 1 : 0);
  Eigen::VectorXd g1 = problem.trend1.gradient(x);
  Eigen::VectorXd g2 = problem.trend2.gradient(x);

  InfoMatrix m = InfoMatrix::Zero(p, p);
  m.topLeftCorner(k1, k1) = moments.q11 * g1 * g1.transpose();
  m.block(0, k1, k1, k2) = moments.q12 * g1 * g2.transpose();
  m.block(k1, 0, k2, k1) = m.block(0, k1, k1, k2).transpose();
  m.block(k1, k1, k2, k2) = moments.q22 * g2 * g2.transpose();
  if (moments.has_alpha) {
    m.block(0, p - 1, k1, 1) = moments.q1a * g1;
    m.block(k1, p - 1, k2, 1) = moments.q2a * g2;
    m.block(p - 1, 0, 1, k1) = m.block(0, p - 1, k1, 1).transpose();
    m.block(p - 1, k1, 1, k2) = m.block(k1, p - 1, k2, 1).transpose();
    m(p - 1, p - 1) = moments.qaa;
  }
  return m;
}

InfoMatrix elementary_fim_continuous(const GaussianMarginProblem& problem, double x,
                                     const LocalParameters& params,
                                     const QuadratureRule& quad) {
  if (params.l() != problem.l())
    throw validation_error("localization alpha presence does not match the problem");
  CopulaSpec spec = effective_copula(problem, params);
  CopulaScoreMoments q = copula_score_moments(spec, problem.estimate_alpha, quad);
  return elementary_fim_continuous(problem, x, q);
}

namespace {

// Core of the binary information; callers choose the degenerate-cell policy.
InfoMatrix binary_fim_core(const BinaryLogisticProblem& problem, double x,
                           const LocalParameters& params, bool* clamped) {
  const int p = problem.dim();
  if (params.dim() != p)
    throw validation_error("localization dimension does not match the problem");

  Eigen::VectorXd theta(p);
  theta.head(4) = params.beta;
  if (problem.estimate_alpha) theta[4] = *params.alpha;

  BinaryLogisticProblem local = problem;
  local.beta1 << theta[0], theta[1];
  local.beta2 << theta[2], theta[3];
  CellProbabilities cells = cell_probs_at(problem, x, theta);
  if (clamped) *clamped = cells.clamped;

  double pi1 = marginal_prob(local, x, 1);
  double pi2 = marginal_prob(local, x, 2);
  Eigen::Vector2d d1 = pi1 * (1.0 - pi1) * Eigen::Vector2d(1.0, x);
  Eigen::Vector2d d2 = pi2 * (1.0 - pi2) * Eigen::Vector2d(1.0, x);

  CopulaSpec spec = problem.estimate_alpha
                        ? CopulaSpec::make(problem.copula.family, theta[4])
                        : CopulaSpec::product();
  double cu = partial_u1(spec, pi1, pi2);
  double cv = partial_u2(spec, pi1, pi2);

  // Rows: p11, p10 = pi1 - p11, p01 = pi2 - p11.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(3, p);
  jac.block(0, 0, 1, 2) = cu * d1.transpose();
  jac.block(0, 2, 1, 2) = cv * d2.transpose();
  jac.block(1, 0, 1, 2) = (1.0 - cu) * d1.transpose();
  jac.block(1, 2, 1, 2) = -cv * d2.transpose();
  jac.block(2, 0, 1, 2) = -cu * d1.transpose();
  jac.block(2, 2, 1, 2) = (1.0 - cv) * d2.transpose();
  if (problem.estimate_alpha) {
    double ca = partial_alpha(spec, pi1, pi2);
    jac(0, p - 1) = ca;
    jac(1, p - 1) = -ca;
    jac(2, p - 1) = -ca;
  }

  Eigen::Matrix3d w = Eigen::Vector3d(1.0 / cells.p11, 1.0 / cells.p10, 1.0 / cells.p01)
                          .asDiagonal();
  w.array() += 1.0 / cells.p00;
  return jac.transpose() * w * jac;
}

}  // namespace

InfoMatrix elementary_fim_binary(const BinaryLogisticProblem& problem, double x,
                                 const LocalParameters& params) {
  bool clamped = false;
  InfoMatrix m = binary_fim_core(problem, x, params, &clamped);
  if (clamped)
    throw degenerate_info_error("degenerate outcome cell in binary information", x);
  return m;
}

FimEvaluator::FimEvaluator(Problem problem, LocalParameters params,
                           const QuadratureRule& quad)
    : problem_(std::move(problem)),
      params_(std::move(params)),
      dim_(problem_dim(problem_)),
      lower_(problem_lower(problem_)),
      upper_(problem_upper(problem_)) {
  if (params_.dim() != dim_)
    throw validation_error("localization dimension does not match the problem");
  if (const auto* gp = std::get_if<GaussianMarginProblem>(&problem_)) {
    CopulaSpec spec = effective_copula(*gp, params_);
    moments_ = copula_score_moments(spec, gp->estimate_alpha, quad);
  }
}

InfoMatrix FimEvaluator::operator()(double x) const {
  if (x < lower_ - 1e-12 || x > upper_ + 1e-12)
    throw validation_error("design point outside the design space");
  if (const auto* gp = std::get_if<GaussianMarginProblem>(&problem_))
    return elementary_fim_continuous(*gp, x, *moments_);
  // The evaluator tolerates cells at the clamp floor: the floored cell's
  // information contribution scales with the cell's own Jacobian row, which
  // vanishes at the same rate, so the matrix stays finite and nearly
  // unchanged. The strict op elementary_fim_binary still rejects such points.
  return binary_fim_core(std::get<BinaryLogisticProblem>(problem_), x, params_,
                         nullptr);
}

InfoMatrix design_fim(const DesignMeasure& design, const FimEvaluator& fim) {
  InfoMatrix m = InfoMatrix::Zero(fim.dim(), fim.dim());
  for (int i = 0; i < design.size(); ++i) m += design.weights[i] * fim(design.points[i]);
  return m;
}

double log_det(const InfoMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw validation_error("log_det requires a nonempty square matrix");
  Eigen::LDLT<Eigen::MatrixXd> ldlt(0.5 * (m + m.transpose()));
  if (ldlt.info() != Eigen::Success) return -kInf;
  Eigen::VectorXd d = ldlt.vectorD();
  double d_max = d.maxCoeff();
  if (!(d_max > 0.0)) return -kInf;
  double sum = 0.0;
  for (int i = 0; i < d.size(); ++i) {
    if (d[i] <= 1e-13 * d_max) return -kInf;
    sum += std::log(d[i]);
  }
  return sum;
}

}  // namespace copdes
