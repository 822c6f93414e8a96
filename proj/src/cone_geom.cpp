#include "mlephase/cone_geom.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mlephase/parallel.hpp"

namespace mlephase {

namespace {

constexpr int kMaxFitIterations = 500;
constexpr double kEscapeNorm = 1e6;

struct Eval
{
  double value;
  Eigen::VectorXd grad;
};

Eval evaluate(const Eigen::MatrixXd& basis, const Eigen::VectorXd& z, const Eigen::VectorXd& theta)
{
  const double inv_n = 1.0 / static_cast<double>(z.size());
  const Eigen::VectorXd slack = (basis * theta - z).cwiseMax(0.0);
  return {slack.squaredNorm() * inv_n, 2.0 * inv_n * (basis.transpose() * slack)};
}

Eigen::MatrixXd active_hessian(const Eigen::MatrixXd& basis, const Eigen::VectorXd& z, const Eigen::VectorXd& theta)
{
  const Eigen::Index k = basis.cols();
  const Eigen::VectorXd r = basis * theta - z;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (r[i] >= 0.0)
      h.selfadjointView<Eigen::Lower>().rankUpdate(basis.row(i).transpose());
  h = h.selfadjointView<Eigen::Lower>();
  return (2.0 / static_cast<double>(z.size())) * h;
}

// Backtracking along `dir`; returns false when no step decreases F.
bool line_search(const Eigen::MatrixXd& basis, const Eigen::VectorXd& z, Eigen::VectorXd& theta, Eval& cur,
                 const Eigen::VectorXd& dir)
{
  constexpr double armijo = 1e-4;
  const double slope = cur.grad.dot(dir);
  if (slope >= 0.0)
    return false;
  double alpha = 1.0;
  for (int halving = 0; halving < 60; ++halving, alpha *= 0.5) {
    const Eigen::VectorXd trial = theta + alpha * dir;
    Eval next = evaluate(basis, z, trial);
    if (next.value <= cur.value + armijo * alpha * slope) {
      theta = trial;
      cur = std::move(next);
      return true;
    }
  }
  return false;
}

}  // namespace

PositivePartFit minimize_positive_part(const Eigen::MatrixXd& basis, const Eigen::VectorXd& z, double tol)
{
  if (basis.rows() != z.size())
    throw std::invalid_argument("minimize_positive_part: basis rows must match z");
  if (z.size() == 0)
    throw std::invalid_argument("minimize_positive_part: empty problem");

  PositivePartFit fit;
  fit.theta = Eigen::VectorXd::Zero(basis.cols());
  Eval cur = evaluate(basis, z, fit.theta);

  for (int iter = 0;; ++iter) {
    fit.iterations = iter;
    fit.grad_norm = cur.grad.norm();
    if (fit.grad_norm <= tol) {
      fit.converged = true;
      break;
    }
    if (fit.theta.norm() > kEscapeNorm) {
      fit.unbounded = true;
      break;
    }
    if (iter == kMaxFitIterations)
      break;

    Eigen::MatrixXd h = active_hessian(basis, z, fit.theta);
    const double damping = 1e-8 * h.trace();
    h.diagonal().array() += damping > 0.0 ? damping : 1e-12;
    const Eigen::VectorXd newton = -h.ldlt().solve(cur.grad);

    const double predicted = -cur.grad.dot(newton);
    if (predicted > 0.0 && predicted <= 1e-15 * (1.0 + cur.value)) {
      // Round-off regime: function values no longer resolve progress.
      fit.theta += newton;
      cur = evaluate(basis, z, fit.theta);
      continue;
    }
    if (line_search(basis, z, fit.theta, cur, newton))
      continue;
    fit.fallback = true;
    if (!line_search(basis, z, fit.theta, cur, -cur.grad))
      break;
  }

  fit.value = fit.unbounded ? 0.0 : cur.value;
  return fit;
}

PositivePartFit empirical_qn(const Eigen::VectorXd& y, const Eigen::VectorXd& v, const Eigen::VectorXd& z, double tol)
{
  if (y.size() != v.size() || y.size() != z.size())
    throw std::invalid_argument("empirical_qn: Y, V and Z must have equal length");
  Eigen::MatrixXd basis(y.size(), 2);
  basis.col(0) = y;
  basis.col(1) = v;
  return minimize_positive_part(basis, z, tol);
}

namespace {

void mean_and_stderr(const std::vector<double>& values, double& mean, double& se)
{
  const double count = static_cast<double>(values.size());
  mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
  if (values.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double v : values)
    ss += (v - mean) * (v - mean);
  se = std::sqrt(ss / (count - 1.0) / count);
}

Eigen::VectorXd standard_normal(Engine& engine, Eigen::Index n)
{
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i)
    z[i] = normal(engine);
  return z;
}

}  // namespace

QnEstimate estimate_qn(const ModelParams& params, long n, long trials, const RngSeed& rng, double tol,
                       unsigned workers)
{
  if (n < 2)
    throw std::invalid_argument("estimate_qn: n must be at least 2");
  if (trials < 1)
    throw std::invalid_argument("estimate_qn: trials must be at least 1");

  std::vector<PositivePartFit> fits(static_cast<std::size_t>(trials));
  parallel_for(fits.size(), workers, [&](std::size_t k) {
    Engine engine = make_engine(rng.substream({k}));
    const YVSample yv = sample_yv(params, engine, n);
    const Eigen::VectorXd z = standard_normal(engine, n);
    fits[k] = empirical_qn(yv.y, yv.v, z, tol);
  });

  QnEstimate out;
  out.params = params;
  out.n = n;
  out.trials = trials;
  for (const auto& f : fits) {
    out.values.push_back(f.value);
    out.unbounded_trials += f.unbounded;
    out.fallback_trials += f.fallback;
  }
  mean_and_stderr(out.values, out.mean, out.stderr_);
  return out;
}

double conic_distance_sq(const Eigen::MatrixXd& basis, const Eigen::VectorXd& z)
{
  if (basis.cols() == 0)
    return (-z).cwiseMax(0.0).squaredNorm();
  return static_cast<double>(z.size()) * minimize_positive_part(basis, z).value;
}

StatDimEstimate statistical_dimension(const Eigen::MatrixXd& basis, long trials, const RngSeed& rng,
                                      unsigned workers)
{
  const Eigen::Index n = basis.rows();
  if (n < 1)
    throw std::invalid_argument("statistical_dimension: n must be at least 1");
  if (trials < 1)
    throw std::invalid_argument("statistical_dimension: trials must be at least 1");
  if (basis.cols() > 3)
    throw std::invalid_argument("statistical_dimension: at most 3 basis vectors are supported");
  if (basis.cols() > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    qr.setThreshold(1e-10);
    if (qr.rank() < basis.cols())
      throw std::invalid_argument("statistical_dimension: basis is rank deficient");
  }

  std::vector<double> dist(static_cast<std::size_t>(trials));
  parallel_for(dist.size(), workers, [&](std::size_t k) {
    Engine engine = make_engine(rng.substream({k}));
    dist[k] = conic_distance_sq(basis, standard_normal(engine, n));
  });

  double mean = 0.0, se = 0.0;
  mean_and_stderr(dist, mean, se);
  return {static_cast<double>(n) - mean, se, trials};
}

StatDimEstimate statistical_dimension(long n, long trials, const RngSeed& rng, unsigned workers)
{
  return statistical_dimension(Eigen::MatrixXd(n, 0), trials, rng, workers);
}

const char* to_string(KinematicPrediction prediction)
{
  switch (prediction) {
    case KinematicPrediction::NoMleWhp: return "no-MLE-whp";
    case KinematicPrediction::MleWhp: return "MLE-whp";
    case KinematicPrediction::IndeterminateBand: return "indeterminate-band";
  }
  return "unknown";
}

KinematicVerdict kinematic_predict(const ModelParams& params, long n, long p, double epsilon, long trials,
                                   const RngSeed& rng, unsigned workers)
{
  if (!(p >= 2 && p < n - 1))
    throw std::invalid_argument("kinematic_predict: need 2 <= p < n - 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("kinematic_predict: epsilon must lie in (0, 1)");

  const YVSample yv = sample_yv(params, rng.substream({0}), n);
  Eigen::MatrixXd basis(n, 2);
  basis.col(0) = yv.y;
  basis.col(1) = yv.v;
  const StatDimEstimate delta = statistical_dimension(basis, trials, rng.substream({1}), workers);

  KinematicVerdict out;
  out.p = p;
  out.n = n;
  out.delta_hat = delta.delta_hat;
  out.delta_stderr = delta.stderr_;
  out.epsilon = epsilon;
  out.a_epsilon = std::sqrt(8.0 * std::log(4.0 / epsilon));
  out.margin = static_cast<double>(p) - 1.0 + delta.delta_hat - static_cast<double>(n);
  const double band = out.a_epsilon * std::sqrt(static_cast<double>(n));
  if (out.margin > band)
    out.predicted = KinematicPrediction::NoMleWhp;
  else if (out.margin < -band)
    out.predicted = KinematicPrediction::MleWhp;
  else
    out.predicted = KinematicPrediction::IndeterminateBand;
  return out;
}

bool tiny_orthant_oracle(const Dataset& data)
{
  data.validate();
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (n > 10 || p > 3)
    throw std::invalid_argument("tiny_orthant_oracle: limited to n <= 10 and p <= 3");

  Eigen::MatrixXd a(n, p + 1);
  a.col(0) = data.y;
  a.rightCols(p) = data.y.asDiagonal() * data.x;

  // Orthonormal basis of the span, so the feasible set {c : 0 <= Q c <= 1} is bounded.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const double cutoff = 1e-10 * svd.singularValues()[0];
  Eigen::Index rank = 0;
  while (rank < svd.singularValues().size() && svd.singularValues()[rank] > cutoff)
    ++rank;
  const Eigen::MatrixXd q = svd.matrixU().leftCols(rank);
  const Eigen::VectorXd objective = q.transpose() * Eigen::VectorXd::Ones(n);

  // Constraint j < n is u_j >= 0 (bound 0); j >= n is u_{j-n} <= 1 (bound 1).
  const Eigen::Index total = 2 * n;
  std::vector<Eigen::Index> pick(static_cast<std::size_t>(rank));
  std::iota(pick.begin(), pick.end(), 0);
  double best = 0.0;
  Eigen::MatrixXd system(rank, rank);
  Eigen::VectorXd rhs(rank);
  for (;;) {
    for (Eigen::Index r = 0; r < rank; ++r) {
      const Eigen::Index j = pick[r];
      system.row(r) = q.row(j % n);
      rhs[r] = j < n ? 0.0 : 1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (lu.rank() == rank) {
      const Eigen::VectorXd c = lu.solve(rhs);
      const Eigen::VectorXd u = q * c;
      if ((u.array() >= -1e-9).all() && (u.array() <= 1.0 + 1e-9).all())
        best = std::max(best, objective.dot(c));
    }
    // Next combination in lexicographic order.
    Eigen::Index r = rank - 1;
    while (r >= 0 && pick[r] == total - rank + r)
      --r;
    if (r < 0)
      break;
    ++pick[r];
    for (Eigen::Index s = r + 1; s < rank; ++s)
      pick[s] = pick[s - 1] + 1;
  }
  return best >= 0.5;
}

}  // namespace mlephase
