#pragma once

#include <vector>

#include <Eigen/Core>

#include "mlephase/prob.hpp"
#include "mlephase/rng.hpp"
#include "mlephase/separability.hpp"

namespace mlephase {

/// Result of minimizing F(theta) = (1/n) ||(B theta - z)_+||^2 over theta.
struct PositivePartFit
{
  Eigen::VectorXd theta;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool unbounded = false;  // iterate escaped past 1e6; value reported as 0
  bool fallback = false;   // Newton stalled and gradient descent took over
};

inline constexpr double kDefaultFitTol = 1e-10;

/// Damped Newton on the piecewise-quadratic F with Hessian
/// (2/n) sum_i b_i b_i' 1{b_i'theta >= z_i} plus Levenberg damping 1e-8 trace.
/// B is n x k (k may be 0).
PositivePartFit minimize_positive_part(const Eigen::MatrixXd& basis, const Eigen::VectorXd& z,
                                       double tol = kDefaultFitTol);

/// Q_n for one realization: min_t (1/n) ||(t0 Y + t1 V - Z)_+||^2.
PositivePartFit empirical_qn(const Eigen::VectorXd& y, const Eigen::VectorXd& v, const Eigen::VectorXd& z,
                             double tol = kDefaultFitTol);

struct QnEstimate
{
  ModelParams params{0.0, 0.0};
  long n = 0;
  long trials = 0;
  std::vector<double> values;
  double mean = 0.0;
  double stderr_ = 0.0;  // sample sd / sqrt(trials); 0 for a single trial
  long unbounded_trials = 0;
  long fallback_trials = 0;
};

/// Trial k samples (Y, V) from the model and then Z ~ N(0, I_n), all from rng.substream({k}).
QnEstimate estimate_qn(const ModelParams& params, long n, long trials, const RngSeed& rng,
                       double tol = kDefaultFitTol, unsigned workers = 1);

struct StatDimEstimate
{
  double delta_hat = 0.0;
  double stderr_ = 0.0;
  long trials = 0;
};

/// min over w in span(basis) of ||(w - z)_+||^2 (the squared distance from z to C(W)).
double conic_distance_sq(const Eigen::MatrixXd& basis, const Eigen::VectorXd& z);

/// Monte Carlo estimate of the statistical dimension of C(W) = W + R^n_+,
///   delta = n - E min_{w in W} ||(w - Z)_+||^2,
/// with W spanned by the columns of basis (n x k, k <= 3, full column rank).
/// Z for trial k comes from rng.substream({k}).
StatDimEstimate statistical_dimension(const Eigen::MatrixXd& basis, long trials, const RngSeed& rng,
                                      unsigned workers = 1);
/// Empty basis (W = {0}); the cone is the orthant.
StatDimEstimate statistical_dimension(long n, long trials, const RngSeed& rng, unsigned workers = 1);

enum class KinematicPrediction
{
  NoMleWhp,
  MleWhp,
  IndeterminateBand,
};

const char* to_string(KinematicPrediction prediction);

struct KinematicVerdict
{
  long p = 0;
  long n = 0;
  double delta_hat = 0.0;
  double delta_stderr = 0.0;
  double margin = 0.0;  // p - 1 + delta_hat - n
  KinematicPrediction predicted = KinematicPrediction::IndeterminateBand;
  double epsilon = 0.0;
  double a_epsilon = 0.0;  // sqrt(8 log(4 / epsilon))
};

inline constexpr double kDefaultEpsilon = 0.05;

/// Samples (Y, V) once from rng.substream({0}), estimates delta(C(span(Y, V)))
/// with Z draws from rng.substream({1}), and classifies the margin against
/// the band a_eps sqrt(n).
KinematicVerdict kinematic_predict(const ModelParams& params, long n, long p, double epsilon, long trials,
                                   const RngSeed& rng, unsigned workers = 1);

/// Exact check, for n <= 10 and p <= 3, of whether span(y, diag(y) x) meets
/// the nonnegative orthant away from 0. Maximizes sum(u) over u in the span
/// with 0 <= u <= 1 by enumerating vertices; the optimum is either 0 or >= 1.
bool tiny_orthant_oracle(const Dataset& data);

}  // namespace mlephase
