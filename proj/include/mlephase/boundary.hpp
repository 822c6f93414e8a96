#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "mlephase/prob.hpp"
#include "mlephase/quadrature.hpp"

namespace mlephase {

/// Value, gradient and Hessian of f(t) = E psi(t0 Y + t1 V) = E (t0 Y + t1 V - Z)_+^2.
struct ObjectiveEval
{
  Eigen::Vector2d t;
  double value = 0.0;
  Eigen::Vector2d gradient;
  Eigen::Matrix2d hessian;
};

/// Minimizer of f and the boundary value h = f(t_star).
struct BoundarySolution
{
  ModelParams params{0.0, 0.0};
  Eigen::Vector2d t_star = Eigen::Vector2d::Zero();
  double h = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

/// Raised when Newton exhausts its iteration budget; carries the last iterate.
class BoundaryNotConverged : public std::runtime_error
{
 public:
  explicit BoundaryNotConverged(BoundarySolution last);
  const BoundarySolution& last() const { return last_; }

 private:
  BoundarySolution last_;
};

inline constexpr double kDefaultBoundaryTol = 1e-9;
inline constexpr int kBoundaryMaxIterations = 200;

/// Rule used when none is given: graded_rule(params).
QuadratureRule boundary_rule(const ModelParams& params);

/// Throws std::invalid_argument for non-finite t.
ObjectiveEval objective(const ModelParams& params, const Eigen::Vector2d& t, const QuadratureRule& rule);
ObjectiveEval objective(const ModelParams& params, const Eigen::Vector2d& t);

/// Damped Newton from t = (0, 0) with Armijo backtracking.
/// Throws BoundaryNotConverged if the gradient norm never reaches tol.
BoundarySolution solve_boundary(const ModelParams& params, const QuadratureRule& rule,
                                double tol = kDefaultBoundaryTol);
BoundarySolution solve_boundary(const ModelParams& params, double tol = kDefaultBoundaryTol);

/// Convenience: solve_boundary(params).h.
double h_mle(const ModelParams& params);

enum class Reduction
{
  YOnly,  // gamma0 == 0: min_t E (t Y - Z)_+^2
  VOnly,  // beta0 == 0:  min_t E (t V - Z)_+^2
};

/// One-dimensional reduction of the boundary problem. t_star carries the
/// unused coordinate as 0. Throws std::invalid_argument if the parameters
/// do not admit the requested reduction.
BoundarySolution solve_boundary_1d(const ModelParams& params, Reduction which, const QuadratureRule& rule,
                                   double tol = kDefaultBoundaryTol);
BoundarySolution solve_boundary_1d(const ModelParams& params, Reduction which, double tol = kDefaultBoundaryTol);

/// Polar parameterization beta0 = rho gamma, gamma0 = sqrt(1 - rho^2) gamma.
struct CurveSpec
{
  double rho = 0.0;
  std::vector<double> gammas;
};

struct CurvePoint
{
  double gamma = 0.0;
  BoundarySolution solution;  // solution.converged == false marks a failed point
};

/// Boundary values along a polar ray, each point solved with boundary_rule.
/// Solver failures are recorded per point.
std::vector<CurvePoint> boundary_curve(const CurveSpec& spec, double tol = kDefaultBoundaryTol);

/// Default gamma cap for curves; h is below 1e-3 past this point.
inline constexpr double kCurveGammaCap = 30.0;

}  // namespace mlephase
